#include "hydroshock/evans.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hydroshock/errors.hpp"

namespace hydroshock {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double d) {
    d = std::remainder(d, 2.0 * kPi);
    return d;
}

} // namespace

// ---------------------------------------------------------------- contour

Contour Contour::semicircle(double radius, double r_indent) {
    if (!(radius > 0.0 && r_indent > 0.0 && r_indent < radius))
        throw DomainError("semicircle contour needs 0 < r_indent < R");
    Contour c;
    c.kind_ = Kind::semicircle;
    c.radius_ = radius;
    c.indent_ = r_indent;
    const cplx i(0.0, 1.0);
    c.pieces_.push_back({true, {}, {}, 0.0, radius, 0.0, kPi / 2, kPi / 2 * radius});
    c.pieces_.push_back({false, i * radius, i * r_indent, 0.0, 0.0, 0.0, 0.0, radius - r_indent});
    c.pieces_.push_back({true, {}, {}, 0.0, r_indent, kPi / 2, -kPi / 2, kPi * r_indent});
    c.pieces_.push_back({false, -i * r_indent, -i * radius, 0.0, 0.0, 0.0, 0.0, radius - r_indent});
    c.pieces_.push_back({true, {}, {}, 0.0, radius, -kPi / 2, 0.0, kPi / 2 * radius});
    for (const auto& p : c.pieces_) c.total_ += p.length;
    return c;
}

Contour Contour::circle(cplx center, double radius) {
    if (!(radius > 0.0)) throw DomainError("circle contour needs a positive radius");
    Contour c;
    c.kind_ = Kind::circle;
    c.radius_ = radius;
    c.center_ = center;
    c.pieces_.push_back({true, {}, {}, center, radius, 0.0, 2.0 * kPi, 2.0 * kPi * radius});
    c.total_ = c.pieces_.front().length;
    return c;
}

cplx Contour::point(double t) const {
    t -= std::floor(t);
    double s = t * total_;
    for (const auto& p : pieces_) {
        if (s <= p.length || &p == &pieces_.back()) {
            const double u = std::clamp(s / p.length, 0.0, 1.0);
            if (p.arc) return p.center + std::polar(p.radius, p.theta0 + u * (p.theta1 - p.theta0));
            return p.a + u * (p.b - p.a);
        }
        s -= p.length;
    }
    return {};
}

std::vector<double> Contour::initial_parameters(int n) const {
    std::vector<double> ts;
    double offset = 0.0;
    for (const auto& p : pieces_) {
        const int k = std::max(8, static_cast<int>(std::lround(n * p.length / total_)));
        for (int j = 0; j < k; ++j) ts.push_back((offset + p.length * j / k) / total_);
        offset += p.length;
    }
    return ts;
}

std::vector<cplx> Contour::vertices(int n) const {
    std::vector<cplx> v;
    for (double t : initial_parameters(n)) v.push_back(point(t));
    return v;
}

bool Contour::encloses(cplx z) const {
    if (kind_ == Kind::circle) return std::abs(z - center_) < radius_;
    return z.real() > 0.0 && std::abs(z) < radius_ && std::abs(z) > indent_;
}

std::string Contour::description() const {
    std::ostringstream os;
    os.precision(12);
    if (kind_ == Kind::circle)
        os << "circle(center=" << center_.real() << (center_.imag() < 0 ? "" : "+") << center_.imag()
           << "i, radius=" << radius_ << ")";
    else
        os << "semicircle(R=" << radius_ << ", r_indent=" << indent_ << ")";
    return os.str();
}

// ---------------------------------------------------------------- values

cplx EvansValue::value() const { return mantissa * std::exp(log_scale); }

double EvansValue::phase() const { return std::arg(mantissa) + log_scale.imag(); }

double EvansValue::log_modulus() const { return std::log(std::abs(mantissa)) + log_scale.real(); }

// ---------------------------------------------------------------- limiting branches

LimitBranch::LimitBranch(const ModelParams& p, double h_limit, Pick pick) : p_(p), h_(h_limit), pick_(pick) {
    const LinearizedMatrices lm = matrices(h_limit, p);
    const Mat2 ai = inverse(lm.a);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m0_(i, j) = ai(i, 0) * lm.e(0, j) + ai(i, 1) * lm.e(1, j);
            m1_(i, j) = -ai(i, j);
        }
    const double tr0 = m0_.trace(), tr1 = m1_.trace();
    const double d0 = m0_.det(), d2 = m1_.det();
    Mat2 sum;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sum(i, j) = m0_(i, j) + m1_(i, j);
    const double d1 = sum.det() - d0 - d2;
    a2_ = tr1 * tr1 - 4.0 * d2;
    const double a1 = 2.0 * tr0 * tr1 - 4.0 * d1;
    const double a0 = tr0 * tr0 - 4.0 * d0;
    const cplx root = std::sqrt(cplx(a1 * a1 - 4.0 * a2_ * a0));
    b1_ = (-a1 + root) / (2.0 * a2_);
    b2_ = (-a1 - root) / (2.0 * a2_);
    fix_sign();
}

void LimitBranch::set_cut(Cut cut) {
    cut_ = cut;
    fix_sign();
}

cplx LimitBranch::root_discriminant(cplx lambda, bool& near_cut) const {
    cplx s;
    near_cut = false;
    if (cut_ == Cut::segment) {
        const cplx ratio = (lambda - b2_) / (lambda - b1_);
        near_cut = ratio.real() < 0.0 && std::abs(ratio.imag()) <= 1e-9 * std::abs(ratio);
        s = (lambda - b1_) * std::sqrt(ratio);
    } else {
        const auto dir = [](cplx b) { return std::abs(b) > 0.0 ? b / std::abs(b) : cplx(1.0); };
        const cplx u1 = dir(b1_), u2 = dir(b2_);
        const cplx z1 = -(lambda - b1_) / u1, z2 = -(lambda - b2_) / u2;
        near_cut = (z1.real() < 0.0 && std::abs(z1.imag()) <= 1e-9 * std::abs(z1))
                || (z2.real() < 0.0 && std::abs(z2.imag()) <= 1e-9 * std::abs(z2));
        s = std::sqrt(u1 * u2) * std::sqrt(z1) * std::sqrt(z2);
    }
    return std::sqrt(a2_) * s;
}

void LimitBranch::fix_sign() {
    sign_ = 1.0;
    const cplx lambda(1.0, 0.0);
    bool near = false;
    const cplx tr = m0_.trace() + lambda * m1_.trace();
    const cplx s = root_discriminant(lambda, near);
    const double plus = (0.5 * (tr + s)).real(), minus = (0.5 * (tr - s)).real();
    const bool want_plus = pick_ == Pick::largest_real ? plus >= minus : plus <= minus;
    sign_ = want_plus ? 1.0 : -1.0;
}

LimitBranch::Mode LimitBranch::operator()(cplx lambda) const {
    Mode m{};
    const cplx tr = m0_.trace() + lambda * m1_.trace();
    m.gamma = 0.5 * (tr + sign_ * root_discriminant(lambda, m.near_cut));
    const cplx m11 = m0_(0, 0) + lambda * m1_(0, 0);
    const cplx m12 = m0_(0, 1) + lambda * m1_(0, 1);
    if (std::abs(m12) < 1e-14) throw DomainError("limiting eigenvector normalization breaks down");
    m.vector = {1.0, (m.gamma - m11) / m12};
    return m;
}

// ---------------------------------------------------------------- solver

EvansSolver::EvansSolver(const ShockProfile& profile, EvansOptions opts)
    : profile_(profile), opts_(opts), reduction_(profile.params()),
      left_(profile.params(), 1.0, LimitBranch::Pick::largest_real),
      right_(profile.params(), profile.params().h_right, LimitBranch::Pick::smallest_real) {
    if (!profile.certifiable()) throw DomainError("Evans functions are not defined for the degenerate class");
    const ProfileOde& g = profile.ode();
    double rate = g.d1(1.0);
    if (profile.profile_class() == ProfileClass::smooth) rate = std::min(rate, std::abs(g.d1(profile.params().h_right)));
    h_max_ = 0.25 / rate;
    c_ = profile.refs().speed;
    q0_ = profile.refs().q0;
    inv_fsq_ = 1.0 / (profile.params().froude * profile.params().froude);
}

int EvansSolver::configure_for(const Contour& contour, bool strict) {
    int straddling = 0;
    const auto choose = [&](LimitBranch& br, const char* side) {
        const auto b = br.branch_points();
        const bool in1 = contour.encloses(b[0]), in2 = contour.encloses(b[1]);
        if (in1 != in2) {
            ++straddling;
            if (!strict) {
                br.set_cut(LimitBranch::Cut::segment);
                return;
            }
            std::ostringstream os;
            os << "branch points of the " << side << " limiting discriminant straddle " << contour.description();
            throw DomainError(os.str());
        }
        br.set_cut(in1 ? LimitBranch::Cut::segment : LimitBranch::Cut::radial);
    };
    choose(left_, "left");
    if (profile_.profile_class() == ProfileClass::smooth) choose(right_, "right");
    return straddling;
}

MagnusOptions EvansSolver::magnus() const {
    MagnusOptions m;
    m.tol = opts_.tol;
    m.h_max = h_max_;
    m.h_init = std::min(1e-2, h_max_);
    return m;
}

Mat2c EvansSolver::coefficient(double x, cplx lambda) const {
    // A^{-1}(E - lambda - A'(H) G(H)) with the entries written out; same content as matrices()
    const double h = profile_.height(x);
    const double g = profile_.ode()(h);
    const double q = c_ * h - q0_;
    const double h2 = h * h, h3 = h2 * h;
    const double a00 = -c_, a01 = 1.0;
    const double a10 = h * inv_fsq_ - q * q / h2;
    const double a11 = 2.0 * q / h - c_;
    const double r10 = 2.0 * q * q / h3 + 1.0 - g * (inv_fsq_ - 2.0 * q * c_ / h2 + 2.0 * q * q / h3);
    const double r11 = -2.0 * q / h2 - g * 2.0 * q0_ / h2;
    const double det = a00 * a11 - a01 * a10;
    const double i00 = a11 / det, i01 = -a01 / det, i10 = -a10 / det, i11 = a00 / det;
    Mat2c out;
    out(0, 0) = i01 * r10 - lambda * i00;
    out(0, 1) = i01 * r11 - lambda * i01;
    out(1, 0) = i11 * r10 - lambda * i10;
    out(1, 1) = i11 * r11 - lambda * i11;
    return out;
}

ModeIntegration EvansSolver::left_mode(cplx lambda) const {
    const auto mode = left_(lambda);
    const double x0 = profile_.left_edge();
    return integrate_mode([&](double x) { return coefficient(x, lambda); }, x0, 0.0, mode.vector, mode.gamma * x0,
                          magnus());
}

ModeIntegration EvansSolver::right_mode(cplx lambda) const {
    const auto mode = right_(lambda);
    const double x0 = profile_.right_edge();
    return integrate_mode([&](double x) { return coefficient(x, lambda); }, x0, 0.0, mode.vector, mode.gamma * x0,
                          magnus());
}

EvansValue EvansSolver::whole_line(cplx lambda) const {
    if (profile_.profile_class() != ProfileClass::smooth)
        throw DomainError("whole-line Evans function needs a smooth profile");
    const ModeIntegration l = left_mode(lambda);
    const ModeIntegration r = right_mode(lambda);
    EvansValue v;
    v.mantissa = l.y[0] * r.y[1] - l.y[1] * r.y[0];
    v.log_scale = l.log_scale + r.log_scale;
    v.rel_modulus = std::abs(v.mantissa) / (norm(l.y) * norm(r.y));
    v.near_branch_cut = left_(lambda).near_cut || right_(lambda).near_cut;
    return v;
}

EvansValue EvansSolver::lopatinsky(cplx lambda) const {
    if (profile_.profile_class() != ProfileClass::discontinuous)
        throw DomainError("Evans-Lopatinsky determinant needs a discontinuous profile");
    const ModelParams& p = profile_.params();
    const ReferencePoints& r = profile_.refs();
    const double hm = profile_.h_minus(), hp = profile_.h_plus();
    const double qm = r.speed * hm - r.q0, qp = r.speed * hp - r.q0;
    const auto source = [](double h, double q) { return h - q * q / (h * h); };
    const cplx j0 = lambda * (hp - hm);
    const cplx j1 = lambda * (qp - qm) - (source(hp, qp) - source(hm, qm));

    const ModeIntegration l = left_mode(lambda);
    const Mat2 a = matrices(hm, p).a;
    const cplx av0 = a(0, 0) * l.y[0] + a(0, 1) * l.y[1];
    const cplx av1 = a(1, 0) * l.y[0] + a(1, 1) * l.y[1];
    // [A v] = -A(0-) v(0-) since the mode vanishes on x > 0
    EvansValue v;
    v.mantissa = -(j1 * av0 - j0 * av1);
    v.log_scale = l.log_scale;
    const double jn = std::sqrt(std::norm(j0) + std::norm(j1));
    const double an = std::sqrt(std::norm(av0) + std::norm(av1));
    v.rel_modulus = std::abs(v.mantissa) / (jn * an);
    v.near_branch_cut = left_(lambda).near_cut;
    return v;
}

EvansValue EvansSolver::evaluate(cplx lambda) const {
    return profile_.profile_class() == ProfileClass::smooth ? whole_line(lambda) : lopatinsky(lambda);
}

ModeIntegration EvansSolver::left_w_mode(cplx lambda) const {
    const cplx mu = asymptotic_rate(lambda, profile_.params(), Side::left);
    const double x0 = profile_.left_edge();
    const auto field = [&](double x) {
        const CoefficientSet k = reduction_.at(profile_.height(x));
        Mat2c m;
        m(0, 1) = 1.0;
        m(1, 0) = -w_potential(lambda, k);
        return m;
    };
    return integrate_mode(field, x0, 0.0, {1.0, mu}, mu * x0, magnus());
}

EvansValue EvansSolver::lopatinsky_w(cplx lambda) const {
    const BoundaryData b = boundary_coeffs(profile_.params());
    const cplx kappa = b.c1 + b.c2 * lambda;
    const ModeIntegration w = left_w_mode(lambda);
    EvansValue v;
    v.mantissa = w.y[1] - kappa * w.y[0];
    v.log_scale = w.log_scale;
    v.rel_modulus = std::abs(v.mantissa) / (norm(w.y) * (1.0 + std::abs(kappa)));
    return v;
}

cplx EvansSolver::robin_ratio_from_v(cplx lambda) const {
    const ModeIntegration l = left_mode(lambda);
    const double c = profile_.refs().speed;
    const CoefficientSet k = reduction_.at(profile_.h_minus());
    const cplx u2 = l.y[1] - c * l.y[0];
    const cplx du2 = -lambda * l.y[0];
    return du2 / u2 + 0.5 * (k.f1 * lambda + k.f2);
}

cplx EvansSolver::robin_ratio_from_w(cplx lambda) const {
    const ModeIntegration w = left_w_mode(lambda);
    return w.y[1] / w.y[0];
}

// ---------------------------------------------------------------- winding

namespace {

std::vector<EvansValue> evaluate_batch(const EvansFunction& d, const std::vector<cplx>& lambdas, int threads) {
    std::vector<EvansValue> out(lambdas.size());
    const std::size_t n = lambdas.size();
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = d(lambdas[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = d(lambdas[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace

namespace {

struct Node {
    WindingSample s;
    int depth;
};

bool needs_split(const Node& a, const Node& b, const WindingOptions& o) {
    const double dphi = std::abs(wrap_phase(b.s.value.phase() - a.s.value.phase()));
    const double dmod = std::abs(b.s.value.log_modulus() - a.s.value.log_modulus());
    return !(dphi < o.max_phase_step && dmod < o.max_log_modulus_step);
}

// Bisects intervals of the sample path until every neighbor pair is close in phase and modulus.
// A closed path also checks the interval from the last node back to the first.
void refine(std::vector<Node>& nodes, bool closed, const EvansFunction& d, const Contour& contour,
            const WindingOptions& opts) {
    for (;;) {
        for (const Node& nd : nodes)
            if (!(nd.s.value.rel_modulus > opts.zero_threshold)) {
                std::ostringstream os;
                os << "determinant vanishes at lambda = " << nd.s.lambda << " on " << contour.description();
                throw ZeroOnContourError(os.str());
            }
        std::vector<std::size_t> split;
        const std::size_t n_int = closed ? nodes.size() : nodes.size() - 1;
        for (std::size_t i = 0; i < n_int; ++i) {
            const Node& a = nodes[i];
            const Node& b = nodes[(i + 1) % nodes.size()];
            if (needs_split(a, b, opts)) {
                if (std::max(a.depth, b.depth) >= opts.max_depth)
                    throw IntegrationError("contour refinement depth exhausted", a.s.t);
                split.push_back(i);
            }
        }
        if (split.empty()) return;
        std::vector<double> ts;
        std::vector<cplx> lams;
        for (std::size_t i : split) {
            const double t0 = nodes[i].s.t;
            double t1 = nodes[(i + 1) % nodes.size()].s.t;
            if (t1 <= t0) t1 += 1.0;
            const double tm = 0.5 * (t0 + t1);
            ts.push_back(tm - std::floor(tm));
            lams.push_back(contour.point(tm));
        }
        const auto vals = evaluate_batch(d, lams, opts.threads);
        std::vector<Node> merged;
        merged.reserve(nodes.size() + split.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            merged.push_back(nodes[i]);
            if (k < split.size() && split[k] == i) {
                const int depth = std::max(nodes[i].depth, nodes[(i + 1) % nodes.size()].depth) + 1;
                merged.push_back({{ts[k], lams[k], vals[k]}, depth});
                ++k;
            }
        }
        if (closed)  // the midpoint of the wrap-around interval may belong at the front
            std::sort(merged.begin(), merged.end(), [](const Node& x, const Node& y) { return x.s.t < y.s.t; });
        nodes = std::move(merged);
    }
}

std::vector<Node> initial_nodes(const EvansFunction& d, const Contour& contour, const std::vector<double>& ts,
                                const WindingOptions& opts) {
    std::vector<cplx> lams;
    for (double t : ts) lams.push_back(contour.point(t));
    const auto vals = evaluate_batch(d, lams, opts.threads);
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < ts.size(); ++i) nodes.push_back({{ts[i], lams[i], vals[i]}, 0});
    return nodes;
}

} // namespace

WindingReport winding_number(const EvansFunction& d, const Contour& contour, const WindingOptions& opts) {
    WindingReport rep;
    rep.contour = contour.description();
    rep.min_modulus = std::numeric_limits<double>::infinity();
    double total = 0.0;
    const std::vector<double> all = contour.initial_parameters(opts.initial_samples);

    if (opts.use_conjugate_symmetry && contour.conjugate_symmetric()) {
        // Upper half path from t = 0 to t = 1/2; the lower half is its mirror image, and D is real
        // at both ends, so the phase gained along the closed contour is twice the half-path phase.
        std::vector<double> ts;
        for (double t : all)
            if (t < 0.5) ts.push_back(t);
        ts.push_back(0.5);
        std::vector<Node> nodes = initial_nodes(d, contour, ts, opts);
        refine(nodes, false, d, contour, opts);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            total += wrap_phase(nodes[i + 1].s.value.phase() - nodes[i].s.value.phase());
        for (const Node& nd : nodes) {
            rep.min_modulus = std::min(rep.min_modulus, nd.s.value.rel_modulus);
            rep.samples.push_back(nd.s);
        }
        for (std::size_t i = nodes.size() - 1; i-- > 1;) {
            WindingSample m = nodes[i].s;
            m.t = 1.0 - m.t;
            m.lambda = std::conj(m.lambda);
            m.value.mantissa = std::conj(m.value.mantissa);
            m.value.log_scale = std::conj(m.value.log_scale);
            rep.samples.push_back(m);
        }
        rep.total_phase = total / kPi;
    } else {
        std::vector<Node> nodes = initial_nodes(d, contour, all, opts);
        refine(nodes, true, d, contour, opts);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            total += wrap_phase(nodes[(i + 1) % nodes.size()].s.value.phase() - nodes[i].s.value.phase());
            rep.min_modulus = std::min(rep.min_modulus, nodes[i].s.value.rel_modulus);
            rep.samples.push_back(nodes[i].s);
        }
        rep.total_phase = total / (2.0 * kPi);
    }
    rep.winding = static_cast<int>(std::lround(rep.total_phase));
    if (!(rep.min_modulus > opts.zero_threshold)) {
        std::ostringstream os;
        os << "determinant nearly vanishes on " << rep.contour << " (min modulus " << rep.min_modulus << ")";
        throw ZeroOnContourError(os.str());
    }
    return rep;
}

WindingReport winding_number(const std::function<cplx(cplx)>& d, const Contour& contour, const WindingOptions& opts) {
    return winding_number(
        [&](cplx z) {
            EvansValue v;
            v.mantissa = d(z);
            v.rel_modulus = std::abs(v.mantissa);
            return v;
        },
        contour, opts);
}

double normalization_rate(const EvansSolver& solver, double a, double b) {
    const EvansValue va = solver.evaluate(a), vb = solver.evaluate(b);
    return (vb.log_modulus() - va.log_modulus()) / (b - a);
}

WindingReport evans_winding(const EvansSolver& solver, const Contour& contour, const CountOptions& opts,
                            bool strict_branches) {
    EvansSolver local = solver;
    const int straddling = local.configure_for(contour, strict_branches);
    // real sample points of the contour give the rate; they lie in the right half-plane here
    const double hi = std::abs(contour.point(0.0));
    const double k = normalization_rate(local, 0.5 * hi, hi);
    WindingReport rep = winding_number(
        [&](cplx z) {
            EvansValue v = local.evaluate(z);
            v.log_scale -= k * z;
            return v;
        },
        contour, opts.winding);
    rep.normalization_rate = k;
    rep.straddling_cuts = straddling;
    return rep;
}

WindingReport count_unstable(const ShockProfile& profile, double radius, double r_indent, const CountOptions& opts) {
    if (!profile.certifiable()) throw DomainError("degenerate profiles are excluded from certification");
    const EvansSolver solver(profile, opts.evans);
    return evans_winding(solver, Contour::semicircle(radius, r_indent), opts);
}

std::string winding_json(const ShockProfile& profile, const WindingReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = "hydroshock/1";
    j["params"] = {{"F", profile.params().froude}, {"H_R", profile.params().h_right}};
    j["class"] = to_string(profile.profile_class());
    j["contour"] = report.contour;
    j["n_samples"] = report.samples.size();
    j["winding"] = report.winding;
    j["min_modulus"] = report.min_modulus;
    j["normalization_rate"] = report.normalization_rate;
    j["straddling_cuts"] = report.straddling_cuts;
    return j.dump(2);
}

void write_winding_csv(const WindingReport& report, std::ostream& os) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17) << "re_lambda,im_lambda,re_D,im_D,log_abs_D,arg_D\n";
    for (const auto& s : report.samples) {
        const cplx v = s.value.value();
        os << s.lambda.real() << ',' << s.lambda.imag() << ',' << v.real() << ',' << v.imag() << ','
           << s.value.log_modulus() << ',' << std::remainder(s.value.phase(), 2.0 * kPi) << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace hydroshock
