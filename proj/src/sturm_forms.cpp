#include "hydroshock/sturm_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "hydroshock/errors.hpp"
#include "hydroshock/linearization.hpp"

namespace hydroshock {

DiscreteOperator discretize_potential(const std::vector<double>& q, double x_min, double x_max, FormBoundary bc,
                                      double robin) {
    // q holds the potential at the n+1 nodes x_min + i h
    const std::size_t n = q.size() - 1;
    if (n < 2) throw DomainError("need at least two intervals");
    DiscreteOperator op;
    op.h = (x_max - x_min) / static_cast<double>(n);
    op.boundary = bc;
    op.robin_coefficient = robin;
    op.x_min = x_min;
    op.x_max = x_max;
    const double ih2 = 1.0 / (op.h * op.h);
    const std::size_t last = bc == FormBoundary::robin ? n : n - 1;
    for (std::size_t i = 1; i <= last; ++i) {
        op.grid.push_back(x_min + op.h * static_cast<double>(i));
        op.diag.push_back(-2.0 * ih2 + q[i]);
        if (i < last) op.offdiag.push_back(ih2);
    }
    if (bc == FormBoundary::robin) {
        // ghost node w_{n+1} = w_{n-1} + 2 h robin w_n
        op.diag.back() = (2.0 * op.h * robin - 2.0) * ih2 + q[n];
        op.offdiag.back() = std::sqrt(2.0) * ih2;
    }
    return op;
}

DiscreteOperator discretize_L(const ShockProfile& profile, int n, bool half, double robin) {
    if (!profile.certifiable()) throw DomainError("forms are not certified for the degenerate class");
    if (n < 200) throw DomainError("form discretization needs n >= 200");
    const Reduction red(profile.params());
    const double x_min = profile.left_edge();
    const double x_max = half ? 0.0 : profile.right_edge();
    std::vector<double> q(static_cast<std::size_t>(n) + 1);
    const double h = (x_max - x_min) / n;
    for (int i = 0; i <= n; ++i) {
        const double x = i == n ? x_max : x_min + h * i;
        q[static_cast<std::size_t>(i)] = red.at(profile.height(x)).q_pot;
    }
    return discretize_potential(q, x_min, x_max, half ? FormBoundary::robin : FormBoundary::dirichlet_truncated,
                                robin);
}

DiscreteOperator discretize_L(const ShockProfile& profile, int n, bool half) {
    double robin = 0.0;
    if (half) {
        if (profile.profile_class() != ProfileClass::discontinuous)
            throw DomainError("the half-line form needs a discontinuous profile");
        robin = boundary_coeffs(profile.params()).c1;
    }
    return discretize_L(profile, n, half, robin);
}

std::size_t eigen_count_below(const DiscreteOperator& op, double x) {
    std::size_t count = 0;
    double d = 1.0;
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    for (std::size_t i = 0; i < op.diag.size(); ++i) {
        const double b2 = i == 0 ? 0.0 : op.offdiag[i - 1] * op.offdiag[i - 1];
        d = (op.diag[i] - x) - (i == 0 ? 0.0 : b2 / d);
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

double eigenvalue_from_top(const DiscreteOperator& op, std::size_t k) {
    const std::size_t n = op.size();
    if (k >= n) throw DomainError("eigenvalue index out of range");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(op.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(op.offdiag[i]) : 0.0);
        lo = std::min(lo, op.diag[i] - r);
        hi = std::max(hi, op.diag[i] + r);
    }
    const std::size_t j = n - 1 - k;  // ascending index
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (eigen_count_below(op, mid) >= j + 1) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double max_eigenvalue(const DiscreteOperator& op) { return eigenvalue_from_top(op, 0); }

int recommended_form_points(const ShockProfile& profile) {
    const Reduction red(profile.params());
    const bool half = profile.profile_class() == ProfileClass::discontinuous;
    const double lo = half ? profile.h_minus() : profile.params().h_right;
    double scale = 0.0;
    for (int i = 0; i <= 400; ++i) scale = std::max(scale, std::abs(red.at(lo + (1.0 - lo) * i / 400.0).f2));
    const double width = (half ? 0.0 : profile.right_edge()) - profile.left_edge();
    const double n = std::ceil(width * scale / 0.02);
    return static_cast<int>(std::clamp(n, 2000.0, 2.0e6));
}

std::vector<SignReport> sign_scan(const ShockProfile& profile, int n_samples) {
    if (!profile.certifiable()) throw DomainError("sign scans need a nondegenerate profile");
    const ModelParams& p = profile.params();
    const Reduction red(p);
    const bool disc = profile.profile_class() == ProfileClass::discontinuous;
    const double lo = disc ? *profile.refs().h_star : p.h_right;
    const int n = std::max(n_samples, 2);

    std::vector<SignReport> out;
    const auto scan = [&](const std::string& name, auto&& f) {
        SignReport r{name, std::numeric_limits<double>::infinity(), lo, false};
        for (int i = 0; i < n; ++i) {
            const double h = lo + (1.0 - lo) * i / (n - 1);
            const double v = f(h);
            if (v < r.min_value) {
                r.min_value = v;
                r.argmin_h = h;
            }
        }
        r.pass = r.min_value > 0.0;
        out.push_back(r);
    };
    scan("alpha", [&](double h) { return red.at(h).alpha; });
    scan("beta", [&](double h) { return red.at(h).beta; });
    scan("f_positivity", [&](double h) { return f_positivity_poly(h, p); });
    if (!disc) {
        scan("f2^2/2+f2'", [&](double h) {
            const CoefficientSet k = red.at(h);
            return 0.5 * k.f2 * k.f2 + k.f2x;
        });
    } else {
        scan("f2^2/4+f2'/2", [&](double h) { return -red.at(h).q_pot; });
        const BoundaryData b = boundary_coeffs(p);
        const double hs = *profile.refs().h_star;
        out.push_back({"-c1", -b.c1, hs, -b.c1 > 0.0});
        const double gap = 0.5 * red.at(hs).f2 - b.c1;
        out.push_back({"f2(H*)/2-c1", gap, hs, gap > 0.0});
    }
    return out;
}

ZeroEigenReport zero_eigenvalue_absence(const ShockProfile& profile) {
    if (profile.profile_class() != ProfileClass::discontinuous)
        throw DomainError("zero-eigenvalue check applies to discontinuous profiles");
    ZeroEigenReport r;
    r.min_quotient = std::numeric_limits<double>::infinity();
    const auto& x = profile.x();
    const auto& h = profile.h();
    for (std::size_t i = 0; i < x.size() && x[i] <= 0.0; ++i) {
        if (h[i] == 1.0) continue;
        r.min_quotient = std::min(r.min_quotient, profile.ode()(h[i]) / (h[i] - 1.0));
    }
    const double hs = profile.h_minus();
    r.robin_gap = boundary_coeffs(profile.params()).c1 - 0.5 * reduce_coefficients(hs, profile.params()).f2;
    return r;
}

FormReport form_check(const ShockProfile& profile, int n) {
    if (!profile.certifiable()) throw DomainError("form checks need a nondegenerate profile");
    FormReport r;
    const bool half = profile.profile_class() == ProfileClass::discontinuous;
    r.op = discretize_L(profile, n > 0 ? n : recommended_form_points(profile), half);
    r.max_eig = max_eigenvalue(r.op);
    r.scans = sign_scan(profile);
    return r;
}

std::string form_json(const ShockProfile& profile, const FormReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = "hydroshock/1";
    j["params"] = {{"F", profile.params().froude}, {"H_R", profile.params().h_right}};
    j["class"] = to_string(profile.profile_class());
    j["W"] = report.op.x_max - report.op.x_min;
    j["h"] = report.op.h;
    j["bc"] = report.op.boundary == FormBoundary::robin ? "robin" : "dirichlet_truncated";
    if (report.op.boundary == FormBoundary::robin) j["robin_c1"] = report.op.robin_coefficient;
    j["max_eig"] = report.max_eig;
    nlohmann::ordered_json scans = nlohmann::ordered_json::array();
    for (const auto& s : report.scans)
        scans.push_back({{"name", s.name}, {"min", s.min_value}, {"argmin", s.argmin_h}, {"pass", s.pass}});
    j["sign_scans"] = scans;
    return j.dump(2);
}

} // namespace hydroshock
