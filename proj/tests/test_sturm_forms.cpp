#include <cmath>
#include <vector>

#include <doctest.h>

#include "hydroshock/errors.hpp"
#include "hydroshock/sturm_forms.hpp"

using namespace hydroshock;

namespace {

const double kPi = std::acos(-1.0);

double bisect(double lo, double hi, const auto& f) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("free Laplacian with Dirichlet ends, Richardson extrapolated") {
    const double w = 3.0;
    const auto top = [&](int n) {
        return max_eigenvalue(discretize_potential(std::vector<double>(n + 1, 0.0), -w, w,
                                                   FormBoundary::dirichlet_truncated));
    };
    const double a = top(400), b = top(800);
    const double exact = -kPi * kPi / (4.0 * w * w);
    CHECK(std::abs(b - exact) < 1e-5);
    CHECK(std::abs((4.0 * b - a) / 3.0 - exact) < 1e-9);
    // second eigenvalue
    const auto op = discretize_potential(std::vector<double>(801, 0.0), -w, w, FormBoundary::dirichlet_truncated);
    CHECK(eigenvalue_from_top(op, 1) == doctest::Approx(4.0 * exact).epsilon(1e-4));
    CHECK(eigen_count_below(op, exact * 0.5) == op.size());
    CHECK(eigen_count_below(op, exact * 1.5) == op.size() - 1);
}

TEST_CASE("Robin closure on the half line") {
    const double w = 2.0;
    for (double kappa : {-3.0, -0.4, 0.2, 2.0}) {
        CAPTURE(kappa);
        // exact top eigenvalue of w'' on [-w, 0], w(-w) = 0, w'(0) = kappa w(0)
        double exact;
        if (kappa < 1.0 / w) {
            const double k = bisect(1e-9, kPi / w - 1e-9, [&](double k) { return k / std::tan(k * w) - kappa; });
            exact = -k * k;
        } else {
            const double k = bisect(1e-9, 50.0, [&](double k) { return k / std::tanh(k * w) - kappa; });
            exact = k * k;
        }
        const auto top = [&](int n) {
            return max_eigenvalue(discretize_potential(std::vector<double>(n + 1, 0.0), -w, 0.0,
                                                       FormBoundary::robin, kappa));
        };
        const double a = top(1000), b = top(2000);
        CHECK(std::abs(b - exact) < 1e-4 * std::max(1.0, std::abs(exact)));
        CHECK(std::abs((4.0 * b - a) / 3.0 - exact) < 1e-7 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("form negativity at the reference parameters") {
    const ShockProfile smooth = integrate_profile(ModelParams::make(1.5, 0.8));
    const ShockProfile disc = integrate_profile(ModelParams::make(1.5, 0.2));
    const FormReport b = form_check(smooth);
    const FormReport b2 = form_check(disc);
    CHECK(b.op.boundary == FormBoundary::dirichlet_truncated);
    CHECK(b2.op.boundary == FormBoundary::robin);
    CHECK(b2.op.robin_coefficient == doctest::Approx(-6.1062191336).epsilon(1e-9));
    CHECK(b.max_eig == doctest::Approx(-0.0909706).epsilon(1e-5));
    CHECK(b2.max_eig == doctest::Approx(-0.768347).epsilon(1e-5));
    const int n = recommended_form_points(disc);
    const double fine = max_eigenvalue(discretize_L(disc, 2 * n, true));
    CHECK(std::abs(fine - b2.max_eig) < 5e-3 * std::abs(fine));
}

TEST_CASE("sign scans") {
    const auto find = [](const std::vector<SignReport>& v, const std::string& name) {
        for (const auto& s : v)
            if (s.name == name) return s;
        FAIL("missing scan " << name);
        return SignReport{};
    };
    const auto smooth = sign_scan(integrate_profile(ModelParams::make(1.5, 0.8)));
    for (const char* name : {"alpha", "beta", "f_positivity", "f2^2/2+f2'"}) CHECK(find(smooth, name).pass);
    const auto disc = sign_scan(integrate_profile(ModelParams::make(1.5, 0.2)));
    for (const char* name : {"alpha", "beta", "f_positivity", "-c1", "f2(H*)/2-c1"}) CHECK(find(disc, name).pass);
    // the pointwise potential bound fails next to the sonic pole
    const SignReport q = find(disc, "f2^2/4+f2'/2");
    CHECK_FALSE(q.pass);
    CHECK(q.min_value == doctest::Approx(-12.61).epsilon(1e-3));
}

TEST_CASE("zero is not an eigenvalue of the half-line problem") {
    const ZeroEigenReport r = zero_eigenvalue_absence(integrate_profile(ModelParams::make(1.5, 0.2)));
    CHECK(r.pass());
    CHECK_THROWS_AS(zero_eigenvalue_absence(integrate_profile(ModelParams::make(1.5, 0.8))), DomainError);
}

TEST_CASE("degenerate profiles are not certified") {
    const ShockProfile deg = integrate_profile(ModelParams::make(1.5, class_threshold(1.5)));
    CHECK_THROWS_AS(form_check(deg), DomainError);
    CHECK_THROWS_AS(sign_scan(deg), DomainError);
}

TEST_CASE("form report JSON") {
    const ShockProfile prof = integrate_profile(ModelParams::make(1.5, 0.2));
    const std::string j = form_json(prof, form_check(prof));
    CHECK(j.find("\"bc\": \"robin\"") != std::string::npos);
    CHECK(j.find("\"schema\": \"hydroshock/1\"") != std::string::npos);
}
