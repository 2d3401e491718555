#include <cmath>
#include <string>

#include <doctest.h>

#include "hydroshock/inequalities.hpp"
#include "hydroshock/model.hpp"
#include "hydroshock/rational_poly.hpp"
#include "oracles.hpp"

using namespace hydroshock;

namespace {

RationalPoly P(std::initializer_list<long> c) { return RationalPoly::from_ints(c); }

// product of (x - r) over the given integer roots
RationalPoly roots(std::initializer_list<long> rs) {
    RationalPoly p = P({1});
    for (long r : rs) p = p * P({-r, 1});
    return p;
}

} // namespace

TEST_CASE("rational polynomial arithmetic") {
    const RationalPoly a = P({1, 2, 3});
    const RationalPoly b = P({-1, 1});
    CHECK((a * b).degree() == 3);
    CHECK((a - a).is_zero());
    CHECK((a - a).degree() == -1);
    CHECK(a.eval(mpq_class(1, 2)) == mpq_class(11, 4));
    CHECK(a.eval(0.5) == doctest::Approx(2.75));
    CHECK(a.derivative() == P({2, 6}));
    CHECK(a.compose(b) == P({2, -4, 3}));
    CHECK(b.pow(3) == P({-1, 3, -3, 1}));
    const auto [q, r] = RationalPoly::divmod(a * b + P({5}), b);
    CHECK(q == a);
    CHECK(r == P({5}));
    CHECK_THROWS_AS(RationalPoly::divmod(a, RationalPoly{}), std::domain_error);
    CHECK(P({0, 0, 3}).to_string("x").find("x^2") != std::string::npos);
}

TEST_CASE("Sturm root counts") {
    const RationalPoly p = roots({1, 2, 3});
    CHECK(sturm_root_count(p, 0, mpq_class(4)) == 3);
    CHECK(sturm_root_count(p, 1, mpq_class(3)) == 1);  // endpoint roots are not counted
    CHECK(sturm_root_count(p, 1) == 2);
    CHECK(sturm_root_count(p, mpq_class(7, 2)) == 0);
    CHECK(sturm_root_count(P({1, 0, 1}), -100) == 0);
    CHECK(sturm_root_count(roots({2, 2, 5}), 0, mpq_class(6)) == 2);
    CHECK(sturm_root_count(roots({1, 1}) * P({1, 0, 1}), 1) == 0);
    CHECK(sturm_root_count(P({-1, 0, 1}), 1) == 0);
    CHECK(sturm_root_count(P({-4, 0, 1}), 1) == 1);
    CHECK_THROWS(sturm_root_count(RationalPoly{}, 0));
}

TEST_CASE("reduced polynomial for H* > Hc") {
    const RationalPoly fin = hstar_hc_final_poly();
    CHECK(fin.eval(mpq_class(2)) == 1085);
    const mpq_class v(101, 100);
    CHECK(fin.eval(v) == 72 * v * v * v * v - 6 * v * v * v - 6 * v * v + 2 * v + 1);
    CHECK(sturm_root_count(fin, 1) == 0);

    // Direct check at F slightly above the class boundary F0 = nu^-2 + nu^-1.
    for (double nu : {1.001, 1.5, 2.0, 5.0, 20.0}) {
        CAPTURE(nu);
        const double hr = 1.0 / (nu * nu);
        const double f = (1.0 / (nu * nu) + 1.0 / nu) * (1.0 + 1e-6);
        const oracle::Model m(f, hr);
        const double s = std::sqrt(hr);
        const double hc = f * std::sqrt(hr * (hr + s + 1.0)) / (std::sqrt(6.0) * (s + 1.0));
        CHECK(m.h_star() > hc);
        CHECK(m.h_star() > f * s / std::sqrt(2.0 * (s + 1.0)));
    }
}

TEST_CASE("the c1 polynomial # is the squared form L^2 S - R^2") {
    // F^2 enters as a polynomial in nu~; check at F^2 = 4 and F^2 = (nu~ + nu~^2)^2
    for (const RationalPoly& fsq : {P({4}), P({0, 1, 1}).pow(2), P({1, 3})}) {
        const RationalPoly l = P({1, 2, 3, 2, 1});
        const RationalPoly s = mpq_class(8) * fsq + P({0, 0, 1, 2, 1});
        const RationalPoly r = fsq * P({0, 4, 4}) + P({0, 3, 5, 5, 5, 3, 1});
        CHECK(sharp_at(fsq) == l * l * s - r * r);
    }
    CHECK(sharp_at(P({4})) == sharp_upper_end_factored());
    CHECK(sharp_at(P({0, 1, 1}).pow(2)) == sharp_lower_end_factored());
    CHECK(sturm_root_count(sharp_upper_end_factored(), 0, mpq_class(1)) == 0);
    CHECK(sturm_root_count(sharp_lower_end_factored(), 0, mpq_class(1)) == 0);
    CHECK(sharp_at(P({4})).eval(mpq_class(1, 2)) > 0);
}

TEST_CASE("certificates on the default sample sets") {
    const auto a = verify_Hstar_gt_Hc(default_nu_samples());
    const auto b = verify_Hstar_lower_bound(default_nu_samples());
    const auto c = verify_c1_bound(default_nu_tilde_samples());
    for (const auto* k : {&a, &b, &c}) {
        CAPTURE(k->name);
        CHECK(k->pass);
        CHECK(k->root_count == 0);
        CHECK(k->min_value > 0);
        CHECK_FALSE(k->witness);
        CHECK(k->float_failures.empty());
        CHECK(k->float_checks > 0);
    }
    CHECK(default_nu_samples().points.size() == 200);
    CHECK(default_nu_tilde_samples().points.size() == 200);
    // (nu^2-1)^2 is smallest at the sample closest to 1
    CHECK(b.argmin == mpq_class(1001, 1000));
}

TEST_CASE("restricted sample set near the class boundary") {
    const SampleSet s = uniform_samples(1, mpq_class(101, 100), 9);
    CHECK(s.points.size() == 9);
    CHECK(s.points.front() > 1);
    CHECK(s.points.back() < mpq_class(101, 100));
    CHECK(verify_Hstar_gt_Hc(s).pass);
    CHECK(verify_Hstar_lower_bound(s).pass);
    CHECK(verify_c1_bound(uniform_samples(0, mpq_class(1, 100), 9)).pass);
}

TEST_CASE("negative control: flipped final forms fail with a witness") {
    IneqOptions o;
    o.inject_sign_flip = true;
    for (const auto& k : {verify_Hstar_gt_Hc(default_nu_samples(), o), verify_Hstar_lower_bound(default_nu_samples(), o),
                          verify_c1_bound(default_nu_tilde_samples(), o)}) {
        CAPTURE(k.name);
        CHECK_FALSE(k.pass);
        CHECK(k.witness.has_value());
    }
}

TEST_CASE("certificate JSON") {
    const std::string j = certificates_json({verify_Hstar_lower_bound(uniform_samples(1, 2, 3))});
    CHECK(j.find("\"schema\": \"hydroshock/1\"") != std::string::npos);
    CHECK(j.find("Hstar_lower_bound") != std::string::npos);
}
