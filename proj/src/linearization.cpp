#include "hydroshock/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hydroshock/errors.hpp"

namespace hydroshock {

LinearizedMatrices matrices(double h, const ModelParams& p) {
    const ReferencePoints r = reference_points(p);
    const double fsq = p.froude * p.froude;
    const double c = r.speed;
    const double q = c * h - r.q0;
    LinearizedMatrices m;
    m.a(0, 0) = -c;
    m.a(0, 1) = 1.0;
    m.a(1, 0) = h / fsq - q * q / (h * h);
    m.a(1, 1) = 2.0 * q / h - c;
    m.e(1, 0) = 2.0 * q * q / (h * h * h) + 1.0;
    m.e(1, 1) = -2.0 * q / (h * h);
    return m;
}

Mat2 matrix_a_derivative(double h, const ModelParams& p) {
    const ReferencePoints r = reference_points(p);
    const double c = r.speed;
    const double q = c * h - r.q0;
    Mat2 d;
    d(1, 0) = 1.0 / (p.froude * p.froude) - 2.0 * q * c / (h * h) + 2.0 * q * q / (h * h * h);
    d(1, 1) = 2.0 * r.q0 / (h * h);
    return d;
}

Reduction::Reduction(const ModelParams& p)
    : p_(p), ode_(p), fsq_(p.froude * p.froude), c_(ode_.refs().speed), q0_(ode_.refs().q0),
      hs3_(std::pow(ode_.refs().hs, 3)) {}

CoefficientSet Reduction::at(double h) const {
    const double g = ode_(h);  // throws near Hs
    const double d3 = h * h * h - hs3_;
    const double q = c_ * h - q0_;
    const double h2 = h * h;
    const double h3 = h2 * h;

    CoefficientSet k;
    k.f1 = 2.0 * fsq_ * q0_ * h / d3;
    k.f3 = -fsq_ * h2 / d3;
    k.f4 = -2.0 * fsq_ * (q + q0_ * g) / d3;
    const double e21 = 2.0 * q * q / h3 + 1.0;
    const double e22 = -2.0 * q / h2;
    const double da21 = 1.0 / fsq_ - 2.0 * q * c_ / h2 + 2.0 * q * q / h3;
    const double da22 = 2.0 * q0_ / h2;
    k.f2 = -(fsq_ * h2 / d3) * (e21 + c_ * e22 - g * (da21 + c_ * da22));
    k.f1x = 2.0 * fsq_ * q0_ * (-2.0 * h3 - hs3_) / (d3 * d3) * g;
    k.f2x = -ode_.d2(h) * g;
    k.alpha = -k.f4 + 0.5 * k.f1 * k.f2 + 0.5 * k.f1x;
    k.beta = -k.f3 + 0.25 * k.f1 * k.f1;
    k.q_pot = -0.25 * k.f2 * k.f2 - 0.5 * k.f2x;
    return k;
}

CoefficientSet reduce_coefficients(double h, const ModelParams& p) {
    return Reduction(p).at(h);
}

double f_positivity_poly(double h, const ModelParams& p) {
    const double s = std::sqrt(p.h_right);
    const double fsq = p.froude * p.froude;
    return 2.0 * (s + 1.0) * (s + 1.0) * h * h * h - fsq * p.h_right * (p.h_right + s + 1.0) * h
         + fsq * p.h_right * p.h_right;
}

cplx w_potential(cplx lambda, const CoefficientSet& k) {
    return -k.beta * lambda * lambda - k.alpha * lambda + k.q_pot;
}

cplx w_potential(cplx lambda, double h, const ModelParams& p) {
    return w_potential(lambda, reduce_coefficients(h, p));
}

cplx asymptotic_rate(cplx lambda, const ModelParams& p, Side side) {
    const double f = p.froude, v = p.nu, fsq = f * f;
    const double v1 = v + 1.0;
    if (side == Side::left) {
        const cplx rad = 4.0 * lambda * lambda * v * v * v1 * v1
                       + 4.0 * lambda * v * v1 * (-fsq + 2.0 * v * v + 2.0 * v)
                       + fsq * std::pow(v * v + v - 2.0, 2);
        return f * v * v1 * std::sqrt(rad) / (2.0 * (-fsq + v * v * v * v + 2.0 * v * v * v + v * v));
    }
    const cplx rad = 4.0 * lambda * lambda * v1 * v1 + 4.0 * lambda * v * v1 * (-fsq * v * v + 2.0 * v + 2.0)
                   + fsq * v * v * std::pow(-2.0 * v * v + v + 1.0, 2);
    return -f * v * v1 * std::sqrt(rad) / (2.0 * (-fsq * v * v * v * v + v * v + 2.0 * v + 1.0));
}

Mat2c limit_matrix(cplx lambda, double h, const ModelParams& p) {
    const LinearizedMatrices m = matrices(h, p);
    const Mat2c ai = complexify(inverse(m.a));
    Mat2c rhs = complexify(m.e);
    rhs(0, 0) -= lambda;
    rhs(1, 1) -= lambda;
    return ai * rhs;
}

namespace {

std::array<cplx, 2> eigenvalues_desc(const Mat2c& m) {
    const cplx tr = m.trace();
    const cplx disc = std::sqrt(tr * tr - 4.0 * m.det());
    std::array<cplx, 2> e = {0.5 * (tr + disc), 0.5 * (tr - disc)};
    if (e[0].real() < e[1].real()) std::swap(e[0], e[1]);
    return e;
}

} // namespace

LimitModeReport limit_mode_signs(cplx lambda, const ModelParams& p) {
    LimitModeReport r;
    r.gamma_left = eigenvalues_desc(limit_matrix(lambda, 1.0, p));
    r.gamma_right = eigenvalues_desc(limit_matrix(lambda, p.h_right, p));
    r.left_pattern = r.gamma_left[0].real() > 0.0 && r.gamma_left[1].real() < 0.0;
    const ProfileClass cls = classify(p);
    if (cls == ProfileClass::discontinuous) {
        r.right_pattern = r.gamma_right[0].real() > 0.0 && r.gamma_right[1].real() > 0.0;
        r.nu_condition = p.nu > (1.0 + std::sqrt(1.0 + 4.0 * p.froude)) / (2.0 * p.froude);
    } else {
        r.right_pattern = r.gamma_right[0].real() > 0.0 && r.gamma_right[1].real() < 0.0;
    }
    return r;
}

namespace {

struct SubshockStates {
    double hm, qm, hp, qp;
};

SubshockStates subshock_states(const ModelParams& p, const ReferencePoints& r) {
    const double hm = *r.h_star;
    return {hm, r.speed * hm - r.q0, p.h_right, r.speed * p.h_right - r.q0};
}

double source2(double h, double q) { return h - q * q / (h * h); }

} // namespace

std::array<cplx, 2> boundary_row(cplx lambda, const ModelParams& p) {
    if (classify(p) != ProfileClass::discontinuous)
        throw DomainError("boundary data exists only for discontinuous profiles");
    const ReferencePoints r = reference_points(p);
    const SubshockStates st = subshock_states(p, r);
    const CoefficientSet k = reduce_coefficients(st.hm, p);
    const Mat2 a = matrices(st.hm, p).a;

    // jump of lambda*W - S(W) across the subshock, then rotated by a quarter turn
    const cplx j0 = lambda * (st.hp - st.hm);
    const cplx j1 = lambda * (st.qp - st.qm) - (source2(st.hp, st.qp) - source2(st.hm, st.qm));
    std::array<cplx, 2> row = {j1, -j0};

    // row * A(H*)
    row = {row[0] * a(0, 0) + row[1] * a(1, 0), row[0] * a(0, 1) + row[1] * a(1, 1)};
    // * T2 = [[1,0],[c,1]]
    row = {row[0] + row[1] * r.speed, row[1]};
    // * diag(-1/lambda, 1): u1 = -u2'/lambda
    row = {-row[0] / lambda, row[1]};
    // * [[1, -(f1 lambda + f2)/2],[0,1]]: (u2', u2) in terms of (w', w)
    row = {row[0], row[1] - 0.5 * (k.f1 * lambda + k.f2) * row[0]};
    return row;
}

BoundaryData boundary_coeffs_unchecked(const ModelParams& p) {
    if (classify(p) != ProfileClass::discontinuous)
        throw DomainError("boundary data exists only for discontinuous profiles");
    const ReferencePoints r = reference_points(p);
    const SubshockStates st = subshock_states(p, r);
    const double s = std::sqrt(p.h_right);
    const double fsq = p.froude * p.froude;
    const double hs3 = r.hs * r.hs * r.hs;
    const double hm = st.hm;
    const double d3 = hm * hm * hm - hs3;
    const CoefficientSet k = reduce_coefficients(hm, p);

    BoundaryData b;
    b.h_star = hm;
    b.c1 = 0.5 * k.f2
         - fsq * (hm * std::pow(p.h_right + s + 1.0, 2) - p.h_right * (2.0 * fsq + 1.0))
               / ((s + 1.0) * (s + 1.0) * d3);
    b.c2 = -fsq * p.h_right * hm / ((s + 1.0) * d3);
    b.wbar_jump = {st.hp - st.hm, st.qp - st.qm};
    const auto flux2 = [&](double h, double q) { return q * q / h + h * h / (2.0 * fsq); };
    b.flux_jump = {st.qp - st.qm, flux2(st.hp, st.qp) - flux2(st.hm, st.qm)};
    b.source_jump = {0.0, source2(st.hp, st.qp) - source2(st.hm, st.qm)};

    // kappa(lambda) = -row1/row0 is affine in lambda; recover it from two evaluations
    const auto kappa = [&](double lam) {
        const auto row = boundary_row(lam, p);
        return (-row[1] / row[0]).real();
    };
    const double k1 = kappa(1.0), k2 = kappa(2.0);
    b.c2_direct = k2 - k1;
    b.c1_direct = k1 - b.c2_direct;
    return b;
}

BoundaryData boundary_coeffs(const ModelParams& p) {
    const BoundaryData b = boundary_coeffs_unchecked(p);
    const double tol1 = 1e-10 * std::max(1.0, std::abs(b.c1));
    const double tol2 = 1e-10 * std::max(1.0, std::abs(b.c2));
    if (!(std::abs(b.c1 - b.c1_direct) <= tol1 && std::abs(b.c2 - b.c2_direct) <= tol2)) {
        std::ostringstream os;
        os.precision(17);
        os << "boundary coefficient paths disagree: c1 " << b.c1 << " vs " << b.c1_direct << ", c2 " << b.c2
           << " vs " << b.c2_direct;
        throw DerivationError(os.str());
    }
    return b;
}

void write_coefficient_csv(const ModelParams& p, double h_lo, double h_hi, int n, std::ostream& os) {
    const Reduction red(p);
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17) << "H,f1,f2,f3,f4,alpha,beta,q_pot\n";
    for (int i = 0; i < n; ++i) {
        const double h = n == 1 ? h_lo : h_lo + (h_hi - h_lo) * i / (n - 1);
        const CoefficientSet k = red.at(h);
        os << h << ',' << k.f1 << ',' << k.f2 << ',' << k.f3 << ',' << k.f4 << ',' << k.alpha << ',' << k.beta
           << ',' << k.q_pot << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace hydroshock
