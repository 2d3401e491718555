#pragma once

#include <string>
#include <vector>

#include "hydroshock/profile.hpp"

namespace hydroshock {

enum class FormBoundary { dirichlet_truncated, robin };

// Symmetric tridiagonal second-difference representation of L w = w'' + q_pot w.
struct DiscreteOperator {
    std::vector<double> grid;     // unknown locations
    double h = 0.0;
    std::vector<double> diag;
    std::vector<double> offdiag;  // size diag.size() - 1
    FormBoundary boundary = FormBoundary::dirichlet_truncated;
    double robin_coefficient = 0.0;
    double x_min = 0.0, x_max = 0.0;

    std::size_t size() const { return diag.size(); }
};

// Whole line: [left_edge, right_edge] with Dirichlet ends, n intervals. Half line: [left_edge, 0]
// with Dirichlet at the left end and the ghost-point closure of w'(0) = robin w(0) at x = 0; the
// last coupling is symmetrized to sqrt(2)/h^2. The half-line Robin coefficient defaults to c1.
DiscreteOperator discretize_L(const ShockProfile& profile, int n, bool half);
DiscreteOperator discretize_L(const ShockProfile& profile, int n, bool half, double robin);

// Same assembly for an arbitrary potential on a uniform grid.
DiscreteOperator discretize_potential(const std::vector<double>& potential_nodes, double x_min, double x_max,
                                      FormBoundary bc, double robin = 0.0);

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
std::size_t eigen_count_below(const DiscreteOperator& op, double x);

// k-th largest eigenvalue (k = 0 is the maximum), bisection to 1e-11 absolute.
double eigenvalue_from_top(const DiscreteOperator& op, std::size_t k);
double max_eigenvalue(const DiscreteOperator& op);

// Grid size that resolves the fastest local scale max|f2| of the profile with h*max|f2| <= 0.02.
int recommended_form_points(const ShockProfile& profile);

struct SignReport {
    std::string name;
    double min_value = 0.0;
    double argmin_h = 0.0;
    bool pass = false;
};

// Minima over the traversed H-range ([H_R, 1] smooth, [H*, 1] discontinuous).
std::vector<SignReport> sign_scan(const ShockProfile& profile, int n_samples = 2001);

struct ZeroEigenReport {
    double min_quotient = 0.0;  // min of H'/(H - 1) over the profile nodes with x < 0
    double robin_gap = 0.0;     // c1 - f2(H*)/2
    bool pass() const { return min_quotient > 0.0 && robin_gap < 0.0; }
};

ZeroEigenReport zero_eigenvalue_absence(const ShockProfile& profile);

struct FormReport {
    DiscreteOperator op;
    double max_eig = 0.0;
    std::vector<SignReport> scans;
};

// B on the whole line (smooth) or B2 on the half line with the Robin closure (discontinuous),
// plus the sign scans. n <= 0 selects recommended_form_points.
FormReport form_check(const ShockProfile& profile, int n = 0);

std::string form_json(const ShockProfile& profile, const FormReport& report);

} // namespace hydroshock
