#include "hydroshock/inequalities.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "hydroshock/errors.hpp"
#include "hydroshock/linearization.hpp"
#include "hydroshock/model.hpp"

namespace hydroshock {

namespace {

RationalPoly P(std::initializer_list<long> ascending) { return RationalPoly::from_ints(ascending); }
RationalPoly C(const mpq_class& v) { return RationalPoly::constant(v); }
const RationalPoly X = RationalPoly::x();

std::string interval_str(const SampleSet& s) {
    return "(" + s.lo.get_str() + ", " + (s.hi ? s.hi->get_str() : std::string("inf")) + ")";
}

// Accumulates exact checks into a certificate.
class Recorder {
public:
    explicit Recorder(IneqCertificate& c) : c_(c) {}

    // Polynomial identities are transcription checks: a mismatch is a hard error.
    void identity(const std::string& name, const RationalPoly& lhs, const RationalPoly& rhs) {
        const RationalPoly diff = lhs - rhs;
        if (!diff.is_zero())
            throw DerivationError(c_.name + ": identity '" + name + "' fails, difference " + diff.to_string());
        c_.checks.push_back({name, true, "exact"});
    }

    void no_roots(const std::string& name, const RationalPoly& p, const std::string& var) {
        const int n = sturm_root_count(p, c_.samples.lo, c_.samples.hi);
        c_.root_count += n;
        std::string detail = std::to_string(n) + " roots of " + p.to_string(var) + " in " + interval_str(c_.samples);
        if (n != 0) fail(name + ": " + detail);
        c_.checks.push_back({name, n == 0, detail});
    }

    // value(sample) must have the given sign at every sample.
    void sign_on_samples(const std::string& name, const std::function<mpq_class(const mpq_class&)>& value,
                         int sign, const std::string& var) {
        for (const auto& s : c_.samples.points) {
            const mpq_class v = value(s);
            if (sgn(v) != sign) {
                const std::string w = name + ": " + var + "=" + s.get_str() + " gives " + v.get_str();
                fail(w);
                c_.checks.push_back({name, false, w});
                return;
            }
        }
        c_.checks.push_back({name, true, std::to_string(c_.samples.points.size()) + " samples"});
    }

    // Final form: tracks the exact minimum over samples.
    void final_form(const std::string& name, const std::function<mpq_class(const mpq_class&)>& value,
                    const std::string& var) {
        bool first = true;
        for (const auto& s : c_.samples.points) {
            const mpq_class v = value(s);
            if (first || v < c_.min_value) {
                c_.min_value = v;
                c_.argmin = s;
                first = false;
            }
        }
        const bool ok = !first && c_.min_value > 0;
        std::string detail = "min " + c_.min_value.get_str() + " at " + var + "=" + c_.argmin.get_str();
        if (!ok) fail(name + ": " + detail);
        c_.checks.push_back({name, ok, detail});
    }

    void floating(bool ok, const std::string& what) {
        ++c_.float_checks;
        if (!ok) c_.float_failures.push_back(what);
    }

    void finish() {
        bool ok = c_.root_count == 0 && c_.min_value > 0 && !c_.samples.points.empty();
        for (const auto& k : c_.checks) ok = ok && k.pass;
        c_.pass = ok;
    }

private:
    void fail(const std::string& w) {
        if (!c_.witness) c_.witness = w;
    }
    IneqCertificate& c_;
};

// Matched Froude numbers inside the discontinuous range (f0, 2).
std::vector<double> froude_probe(double f0) {
    std::vector<double> out;
    for (double t : {1e-6, 0.25, 0.5, 0.75, 1.0 - 1e-6}) out.push_back(f0 + t * (2.0 - f0));
    return out;
}

std::string at(double f, double hr) {
    std::ostringstream os;
    os.precision(17);
    os << "(F=" << f << ", H_R=" << hr << ")";
    return os.str();
}

} // namespace

SampleSet default_nu_samples() {
    SampleSet s;
    for (long k = 1; k <= 100; ++k) s.points.emplace_back(mpq_class(1000 + k, 1000));
    for (long k = 1; k <= 100; ++k) s.points.emplace_back(mpq_class(1100 + 99 * k, 1000));
    for (auto& v : s.points) v.canonicalize();
    s.lo = 1;
    return s;
}

SampleSet default_nu_tilde_samples() {
    SampleSet s;
    for (long k = 1; k <= 200; ++k) {
        s.points.emplace_back(mpq_class(k, 201));
        s.points.back().canonicalize();
    }
    s.lo = 0;
    s.hi = mpq_class(1);
    return s;
}

SampleSet uniform_samples(const mpq_class& lo, const mpq_class& hi, int n) {
    if (n < 1 || !(lo < hi)) throw DomainError("uniform_samples needs n >= 1 and lo < hi");
    SampleSet s;
    s.lo = lo;
    s.hi = hi;
    for (int k = 1; k <= n; ++k) s.points.push_back(lo + (hi - lo) * mpq_class(k, n + 1));
    return s;
}

RationalPoly hstar_hc_final_poly() { return P({1, 2, -6, -6, 72}); }

namespace {

// #(F, nu~) = a F^4 + b F^2 + c with coefficients in nu~.
struct Sharp {
    RationalPoly a = C(-16) * X.pow(2) * P({1, 1}).pow(2);
    RationalPoly b = P({8, 32, 56, 64, 72, 48, 16});
    RationalPoly c = C(-4) * X.pow(2) * P({1, 1}).pow(2) * P({2, 2, 3, 2, 1});
};

} // namespace

RationalPoly sharp_at(const RationalPoly& f_squared) {
    const Sharp s;
    return s.a * f_squared.pow(2) + s.b * f_squared + s.c;
}

RationalPoly sharp_lower_end_factored() {
    return C(4) * X.pow(3) * P({1, -1}) * P({1, 1}).pow(3) * P({6, 11, 20, 24, 16, 4});
}

RationalPoly sharp_upper_end_factored() { return C(4) * P({-2, 1, 1}).pow(2) * P({2, 10, 9, -2, -1}); }

IneqCertificate verify_Hstar_gt_Hc(const SampleSet& nu, const IneqOptions& opts) {
    IneqCertificate cert;
    cert.name = "Hstar_gt_Hc";
    cert.samples = nu;
    Recorder rec(cert);

    // F^2 coefficient after the last squaring, and the right side.
    const RationalPoly lin = RationalPoly({0, mpq_class(-1, 3), mpq_class(-1, 3), mpq_class(11, 3)});
    const RationalPoly p1 = RationalPoly({0, 0, mpq_class(1, 9), mpq_class(2, 9), mpq_class(-7, 3),
                                          mpq_class(-22, 9), mpq_class(121, 9)});
    const RationalPoly r1 = C(mpq_class(2, 3)) * P({1, 2, 1}) * P({1, 1, 1});
    const RationalPoly p2 = RationalPoly({0, 0, mpq_class(1, 9), mpq_class(2, 9), 0, 0, mpq_class(78, 9)});
    const RationalPoly fin = hstar_hc_final_poly();

    rec.identity("squared left side", lin.pow(2), p1);
    rec.identity("squared right side", C(mpq_class(4, 6)) * P({1, 1}).pow(2) * P({1, 1, 1}), r1);
    rec.identity("coefficient minorant", p1 - p2, C(mpq_class(1, 9)) * X.pow(4) * P({-1, 1}) * P({21, 43}));
    // F0 = (1+nu)/nu^2; 9 nu^4 (F0^2 p2 - r1) = nu^2 (nu+1)^2 fin
    rec.identity("endpoint reduction", C(9) * P({1, 1}).pow(2) * p2 - C(9) * X.pow(4) * r1,
                 X.pow(2) * P({1, 1}).pow(2) * fin);

    rec.no_roots("F^2 coefficient positive", p1, "nu");
    rec.no_roots("minorant gap positive", P({21, 43}) * P({-1, 1}), "nu");
    rec.no_roots("final polynomial positive", opts.inject_sign_flip ? -fin : fin, "nu");
    rec.sign_on_samples("F^2 coefficient at samples", [&](const mpq_class& v) { return p1.eval(v); }, 1, "nu");
    rec.final_form("(nu+1)^2 (72nu^4-6nu^3-6nu^2+2nu+1) / (9nu^2)", [&](const mpq_class& v) {
        mpq_class val = (v + 1) * (v + 1) * fin.eval(v) / (9 * v * v);
        return opts.inject_sign_flip ? mpq_class(-val) : val;
    }, "nu");

    for (const auto& s : nu.points) {
        const double n = s.get_d();
        const double hr = 1.0 / (n * n);
        for (double f : froude_probe(1.0 / (n * n) + 1.0 / n)) {
            const std::string where = at(f, hr);
            try {
                const auto refs = reference_points(ModelParams::make(f, hr));
                rec.floating(refs.h_star && *refs.h_star > refs.hc, "H* > Hc " + where);
            } catch (const std::exception& e) {
                rec.floating(false, std::string(e.what()) + " " + where);
            }
            rec.floating(2 * f * n * std::sqrt(n * n + n + 1) / std::sqrt(6.0) + n + 1 > 0,
                         "right side positive before squaring " + where);
            rec.floating(f * lin.eval(n) > 0, "left side positive before squaring " + where);
            rec.floating(f * f * p1.eval(n) - r1.eval(n) > 0, "squared form " + where);
        }
    }
    rec.finish();
    return cert;
}

IneqCertificate verify_Hstar_lower_bound(const SampleSet& nu, const IneqOptions& opts) {
    IneqCertificate cert;
    cert.name = "Hstar_lower_bound";
    cert.samples = nu;
    Recorder rec(cert);

    const RationalPoly coef = P({0, 0, 0, 0, 1, -6, 9});   // 9nu^6 - 6nu^5 + nu^4
    const RationalPoly minor = P({0, 0, 0, 0, 1, 0, 3});   // 3nu^6 + nu^4
    const RationalPoly rhs = C(2) * X * P({1, 1}).pow(3);  // 2(nu+1)^3 nu
    const RationalPoly fin = P({-1, 0, 1}).pow(2);         // (nu^2-1)^2

    rec.identity("squared left side", P({0, 0, -1, 3}).pow(2), coef);
    rec.identity("squared right side", P({1, 1}).pow(2) * C(2) * X * P({1, 1}), rhs);
    rec.identity("coefficient minorant", coef - minor, C(6) * X.pow(5) * P({-1, 1}));
    // nu^4 (F0^2 minor - rhs) = nu^4 fin with F0 = (1+nu)/nu^2
    rec.identity("endpoint reduction", P({1, 1}).pow(2) * minor - X.pow(4) * rhs, X.pow(4) * fin);

    rec.no_roots("minorant gap positive", C(6) * X.pow(5) * P({-1, 1}), "nu");
    rec.no_roots("minorant coefficient positive", minor, "nu");
    rec.no_roots("final polynomial positive", opts.inject_sign_flip ? -fin : fin, "nu");
    rec.sign_on_samples("endpoint chain 9F^2nu^6-6F^2nu^5+F^2nu^4 > 2(nu+1)^3 nu", [&](const mpq_class& v) {
        const mpq_class f0 = 1 / (v * v) + 1 / v;
        return mpq_class(f0 * f0 * coef.eval(v) - rhs.eval(v));
    }, 1, "nu");
    rec.final_form("(nu^2-1)^2", [&](const mpq_class& v) {
        const mpq_class val = fin.eval(v);
        return opts.inject_sign_flip ? mpq_class(-val) : val;
    }, "nu");

    for (const auto& s : nu.points) {
        const double n = s.get_d();
        const double hr = 1.0 / (n * n);
        for (double f : froude_probe(1.0 / (n * n) + 1.0 / n)) {
            const std::string where = at(f, hr);
            try {
                const auto refs = reference_points(ModelParams::make(f, hr));
                const double bound = f * std::sqrt(hr) / std::sqrt(2.0 * (std::sqrt(hr) + 1.0));
                rec.floating(refs.h_star && *refs.h_star > bound, "H* > F sqrt(H_R)/sqrt(2(sqrt(H_R)+1)) " + where);
            } catch (const std::exception& e) {
                rec.floating(false, std::string(e.what()) + " " + where);
            }
            rec.floating(3 * f * n * n * n - f * n * n > 0, "left side positive before squaring " + where);
            rec.floating(f * f * coef.eval(n) - rhs.eval(n) > 0, "squared form " + where);
        }
    }
    rec.finish();
    return cert;
}

IneqCertificate verify_c1_bound(const SampleSet& nu_tilde, const IneqOptions& opts) {
    IneqCertificate cert;
    cert.name = "c1_bound";
    cert.samples = nu_tilde;
    Recorder rec(cert);
    const Sharp sh;

    // (l sqrt(8F^2 + s0) > r1 F^2 + r0)  squared is  l^2 (8F^2 + s0) - (r1 F^2 + r0)^2 = #.
    const RationalPoly l = P({1, 2, 3, 2, 1});
    const RationalPoly s0 = P({0, 0, 1, 2, 1});
    const RationalPoly r1 = P({0, 4, 4});
    const RationalPoly r0 = P({0, 3, 5, 5, 5, 3, 1});
    rec.identity("squared form, F^0", l.pow(2) * s0 - r0.pow(2), sh.c);
    rec.identity("squared form, F^2", C(8) * l.pow(2) - C(2) * r0 * r1, sh.b);
    rec.identity("squared form, F^4", -r1.pow(2), sh.a);

    const RationalPoly lower = sharp_at(P({0, 1, 1}).pow(2));
    const RationalPoly upper = sharp_at(C(4));
    rec.identity("#(nu~+nu~^2, nu~) factorization", lower, sharp_lower_end_factored());
    rec.identity("#(2, nu~) factorization", upper, sharp_upper_end_factored());
    const RationalPoly quartic = P({2, 10, 9, -2, -1});
    const RationalPoly minorant = P({2, 10, 6});
    rec.identity("minorant gap", quartic - minorant, X.pow(2) * P({1, -1}) * P({3, 1}));

    rec.no_roots("F^4 coefficient negative (concave in F^2)", sh.a, "nu~");
    rec.no_roots("F^2 coefficient positive (axis at positive F^2)", sh.b, "nu~");
    rec.no_roots("#(nu~+nu~^2, nu~) positive", opts.inject_sign_flip ? -lower : lower, "nu~");
    rec.no_roots("#(2, nu~) positive", opts.inject_sign_flip ? -upper : upper, "nu~");
    rec.no_roots("minorant positive", minorant, "nu~");
    rec.no_roots("minorant gap positive", X.pow(2) * P({1, -1}) * P({3, 1}), "nu~");
    rec.no_roots("(nu~^2+nu~-2)^2 positive", P({-2, 1, 1}).pow(2), "nu~");

    rec.sign_on_samples("F^4 coefficient at samples", [&](const mpq_class& v) { return sh.a.eval(v); }, -1, "nu~");
    rec.sign_on_samples("axis of symmetry at samples", [&](const mpq_class& v) {
        return mpq_class(-sh.b.eval(v) / (2 * sh.a.eval(v)));
    }, 1, "nu~");
    rec.sign_on_samples("# at interior F^2", [&](const mpq_class& v) {
        const mpq_class x0 = (v + v * v) * (v + v * v);
        mpq_class m = sh.a.eval(v) * x0 * x0 + sh.b.eval(v) * x0 + sh.c.eval(v);
        for (int k = 1; k < 8; ++k) {
            const mpq_class xf = x0 + (4 - x0) * mpq_class(k, 8);
            const mpq_class val = sh.a.eval(v) * xf * xf + sh.b.eval(v) * xf + sh.c.eval(v);
            if (val < m) m = val;
        }
        return opts.inject_sign_flip ? mpq_class(-m) : m;
    }, 1, "nu~");
    rec.final_form("min(#(nu~+nu~^2, nu~), #(2, nu~))", [&](const mpq_class& v) {
        const mpq_class a = lower.eval(v), b = upper.eval(v);
        const mpq_class val = a < b ? a : b;
        return opts.inject_sign_flip ? mpq_class(-val) : val;
    }, "nu~");

    for (const auto& s : nu_tilde.points) {
        const double t = s.get_d();
        const double hr = t * t;
        for (double f : froude_probe(t + t * t)) {
            const std::string where = at(f, hr);
            try {
                const auto p = ModelParams::make(f, hr);
                const auto refs = reference_points(p);
                if (!refs.h_star) {
                    rec.floating(false, "not discontinuous " + where);
                    continue;
                }
                const double hs = *refs.h_star;
                const double g = hr + t + 1.0;
                rec.floating(hs * g * g - hr * (2 * f * f + 1) > 0, "reduced form " + where);
                const BoundaryData bd = boundary_coeffs_unchecked(p);
                rec.floating(bd.c1 < 0.5 * Reduction(p).at(hs).f2, "c1 < f2(H*)/2 " + where);
            } catch (const std::exception& e) {
                rec.floating(false, std::string(e.what()) + " " + where);
            }
            const double fsq = f * f;
            rec.floating(r1.eval(t) * fsq + r0.eval(t) > 0, "right side positive before squaring " + where);
            rec.floating(sh.a.eval(t) * fsq * fsq + sh.b.eval(t) * fsq + sh.c.eval(t) > 0, "squared form " + where);
        }
    }
    rec.finish();
    return cert;
}

namespace {

nlohmann::ordered_json to_json(const IneqCertificate& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["n_samples"] = c.samples.points.size();
    j["interval"] = interval_str(c.samples);
    j["min_value"] = c.min_value.get_str();
    j["argmin"] = c.argmin.get_str();
    j["root_count"] = c.root_count;
    j["pass"] = c.pass;
    if (c.witness) j["witness"] = *c.witness;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"pass", k.pass}, {"detail", k.detail}});
    j["checks"] = checks;
    j["float_checks"] = c.float_checks;
    j["float_failures"] = c.float_failures;
    return j;
}

} // namespace

std::string certificate_json(const IneqCertificate& c, int indent) { return to_json(c).dump(indent); }

std::string certificates_json(const std::vector<IneqCertificate>& certs, int indent) {
    nlohmann::ordered_json j;
    j["schema"] = "hydroshock/1";
    bool all = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : certs) {
        arr.push_back(to_json(c));
        all = all && c.pass;
    }
    j["certificates"] = arr;
    j["pass"] = all;
    return j.dump(indent);
}

} // namespace hydroshock
