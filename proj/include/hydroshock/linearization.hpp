#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include "hydroshock/mat2.hpp"
#include "hydroshock/model.hpp"

namespace hydroshock {

// Linearization A v' = (E - lambda - A_x) v about a profile point (H, Q = cH - q0).
struct LinearizedMatrices {
    Mat2 a;
    Mat2 e;
};

LinearizedMatrices matrices(double h, const ModelParams& p);

// dA/dH along the profile family (Q = cH - q0).
Mat2 matrix_a_derivative(double h, const ModelParams& p);

// Coefficients of u2'' + (f1 lambda + f2) u2' + (f3 lambda^2 + f4 lambda) u2 = 0 and of the
// Liouville-transformed equation w'' + (-beta lambda^2 - alpha lambda + q_pot) w = 0.
struct CoefficientSet {
    double f1 = 0, f2 = 0, f3 = 0, f4 = 0;
    double f1x = 0, f2x = 0;
    double alpha = 0, beta = 0, q_pot = 0;
};

// Closed-form rational expressions in H; throws SingularityError near Hs.
class Reduction {
public:
    explicit Reduction(const ModelParams& p);

    CoefficientSet at(double h) const;
    const ProfileOde& ode() const { return ode_; }

private:
    ModelParams p_;
    ProfileOde ode_;
    double fsq_, c_, q0_, hs3_;
};

CoefficientSet reduce_coefficients(double h, const ModelParams& p);

// 2(sqrt(H_R)+1)^2 H^3 - F^2 H_R (H_R + sqrt(H_R) + 1) H + F^2 H_R^2, positive along profiles.
double f_positivity_poly(double h, const ModelParams& p);

cplx w_potential(cplx lambda, double h, const ModelParams& p);
cplx w_potential(cplx lambda, const CoefficientSet& k);

enum class Side { left, right };

// Closed-form far-field decay rates of the w-equation (principal square root).
cplx asymptotic_rate(cplx lambda, const ModelParams& p, Side side);

struct LimitModeReport {
    std::array<cplx, 2> gamma_left{};   // sorted by descending real part
    std::array<cplx, 2> gamma_right{};
    bool left_pattern = false;   // (+, -)
    bool right_pattern = false;  // (+, -) smooth, (+, +) discontinuous
    bool nu_condition = true;    // nu > (1 + sqrt(1+4F)) / (2F), discontinuous only
    bool pass() const { return left_pattern && right_pattern && nu_condition; }
};

// Eigenvalues of A^{-1}(E - lambda) at the two end states and the sign pattern they must show.
LimitModeReport limit_mode_signs(cplx lambda, const ModelParams& p);

// Limiting coefficient matrix A^{-1}(E - lambda) of the first-order system at a constant state.
Mat2c limit_matrix(cplx lambda, double h, const ModelParams& p);

struct BoundaryData {
    double c1 = 0, c2 = 0;                   // w'(0) = (c1 + c2 lambda) w(0)
    double c1_direct = 0, c2_direct = 0;     // recovered from the assembled boundary row
    std::array<double, 2> wbar_jump{};       // ([H], [Q]) = state(0+) - state(0-)
    std::array<double, 2> flux_jump{};       // [(Q, Q^2/H + H^2/(2F^2))]
    std::array<double, 2> source_jump{};     // [(0, H - Q^2/H^2)]
    double h_star = 0;
};

// Robin data at the subshock. Throws DomainError unless discontinuous, DerivationError if
// the closed forms and the directly assembled boundary row disagree.
BoundaryData boundary_coeffs(const ModelParams& p);
// Same data without the agreement check; near the class boundary (H* close to Hs) the two
// paths lose digits at different rates.
BoundaryData boundary_coeffs_unchecked(const ModelParams& p);

// Boundary row r(lambda) acting on (w', w)(0-); the Robin coefficient is -r[1]/r[0].
std::array<cplx, 2> boundary_row(cplx lambda, const ModelParams& p);

void write_coefficient_csv(const ModelParams& p, double h_lo, double h_hi, int n, std::ostream& os);

} // namespace hydroshock
