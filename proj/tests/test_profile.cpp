#include <cmath>
#include <sstream>

#include <doctest.h>

#include "hydroshock/errors.hpp"
#include "hydroshock/profile.hpp"
#include "oracles.hpp"

using namespace hydroshock;

namespace {

bool monotone_decreasing(const ShockProfile& p) {
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p.h()[i] > p.h()[i - 1]) return false;
    return true;
}

} // namespace

TEST_CASE("reference profiles: residual, monotonicity and end states") {
    for (double hr : {0.2, class_threshold(1.5), 0.8}) {
        CAPTURE(hr);
        const ShockProfile prof = integrate_profile(ModelParams::make(1.5, hr));
        CHECK(prof.residual().max_residual < 1e-8);
        CHECK(monotone_decreasing(prof));
        CHECK(std::abs(prof.h().front() - 1.0) < 1e-8);
        CHECK(std::abs(prof.h().back() - hr) < 1e-8);
    }
}

TEST_CASE("discontinuous profile carries H* at 0- and jumps to H_R") {
    const ShockProfile prof = integrate_profile(ModelParams::make(1.5, 0.2));
    REQUIRE(prof.subshock_index());
    CHECK(prof.x()[*prof.subshock_index()] == 0.0);
    CHECK(prof.h_minus() == doctest::Approx(0.5631076554).epsilon(1e-9));
    CHECK(prof.h_plus() == doctest::Approx(0.2));
    CHECK(prof.height(0.5) == doctest::Approx(0.2));
    const LaxReport lax = lax_check(prof);
    CHECK(lax.pass());
    CHECK(std::abs(lax.mass_residual) < 1e-12);
    CHECK(std::abs(lax.momentum_residual) < 1e-12);
}

TEST_CASE("profile positions agree with quadrature of dx/dH = 1/G") {
    struct Case { double f, hr; };
    for (Case cs : {Case{1.5, 0.8}, Case{1.5, 0.2}, Case{0.3, 0.6}, Case{1.9, 0.05}}) {
        CAPTURE(cs.f);
        CAPTURE(cs.hr);
        const ModelParams p = ModelParams::make(cs.f, cs.hr);
        const ShockProfile prof = integrate_profile(p);
        const oracle::Model m(cs.f, cs.hr);
        const bool disc = classify(p) == ProfileClass::discontinuous;
        const double anchor = disc ? m.h_star() : 0.5 * (1.0 + cs.hr);
        const double lo = disc ? anchor : cs.hr;
        for (int k = 1; k <= 9; ++k) {
            const double target = lo + (1.0 - lo) * (0.05 + 0.9 * k / 10.0);
            const double x = oracle::simpson([&](double h) { return 1.0 / m.G(h); }, anchor, target, 1e-13);
            CHECK(std::abs(prof.height(x) - target) < 1e-8);
        }
    }
}

TEST_CASE("residual falls as the step cap is refined") {
    const ModelParams p = ModelParams::make(1.5, 0.8);
    double last = 1.0;
    for (int n : {200, 400, 800, 1600}) {
        ProfileOptions o;
        o.n_points = n;
        o.tol = 1e-2;
        const double r = integrate_profile(p, o).residual().max_residual;
        CHECK(r < last);
        last = r;
    }
    CHECK(last < 1e-9);
}

TEST_CASE("whole 10x10 grid integrates to tolerance") {
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double f = 0.3 + 1.6 * i / 9.0, hr = 0.05 + 0.9 * j / 9.0;
            CAPTURE(f);
            CAPTURE(hr);
            const ShockProfile prof = integrate_profile(ModelParams::make(f, hr));
            CHECK(prof.residual().max_residual < 1e-9);
            CHECK(monotone_decreasing(prof));
        }
}

TEST_CASE("CSV and JSON output") {
    std::ostringstream disc, smooth;
    write_profile_csv(integrate_profile(ModelParams::make(1.5, 0.2)), disc);
    write_profile_csv(integrate_profile(ModelParams::make(1.5, 0.8)), smooth);
    CHECK(disc.str().rfind("x,H,Q\n", 0) == 0);
    CHECK(disc.str().find("\n0-,") != std::string::npos);
    CHECK(disc.str().find("\n0+,") != std::string::npos);
    CHECK(smooth.str().find("0-") == std::string::npos);
    CHECK(smooth.str().find("0+") == std::string::npos);
    const std::string j = profile_json(integrate_profile(ModelParams::make(1.5, 0.8)));
    CHECK(j.find("\"schema\": \"hydroshock/1\"") != std::string::npos);
}

TEST_CASE("constructor validation") {
    const ModelParams p = ModelParams::make(1.5, 0.8);
    CHECK_THROWS_AS(ShockProfile(p, {0.0, 0.0, 1.0}, {0.9, 0.85, 0.8}), DomainError);
    CHECK_THROWS_AS(ShockProfile(ModelParams::make(1.5, 0.2), {-1.0, 1.0}, {0.9, 0.2}), DomainError);
}
