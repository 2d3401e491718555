#pragma once
// Independent reference computations used by the tests. Nothing here calls into the library.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cd = std::complex<double>;

// Model written directly from the definitions, templated so complex-step derivatives work.
struct Model {
    double F, HR, s, c, q0, hs3, h3;

    Model(double froude, double h_right) : F(froude), HR(h_right) {
        s = std::sqrt(HR);
        c = (1.0 - s * s * s) / (1.0 - s * s);
        q0 = c - 1.0;
        hs3 = F * F * q0 * q0;
        h3 = q0 * q0 / HR;
    }
    double hs() const { return std::cbrt(hs3); }
    double h_star() const {
        const double nu = 1.0 / s;
        return (-nu - 1.0 + std::sqrt(8 * F * F * nu * nu * nu * nu + nu * nu + 2 * nu + 1)) / (2 * (nu + 1)) * HR;
    }

    template <class T> T Q(T h) const { return c * h - q0; }
    // H' = G(H): momentum balance of the travelling wave with mass flux Q = cH - q0.
    template <class T> T G(T h) const { return F * F * (h * h * h - Q(h) * Q(h)) / (h * h * h - hs3); }

    template <class T> std::array<T, 4> A(T h) const {
        const T q = Q(h);
        return {T(-c), T(1.0), h / (F * F) - q * q / (h * h), 2.0 * q / h - c};
    }
    template <class T> std::array<T, 4> E(T h) const {
        const T q = Q(h);
        return {T(0.0), T(0.0), 2.0 * q * q / (h * h * h) + 1.0, -2.0 * q / (h * h)};
    }
};

// Complex-step derivative of a real-analytic function.
inline double dstep(const std::function<cd(cd)>& f, double x) {
    const double h = 1e-30;
    return f(cd(x, h)).imag() / h;
}

struct Reduced {
    double f1, f2, f3, f4;
};

// Generic elimination of A v' = (E - lambda - A_x) v to u2'' + (f1 l + f2) u2' + (f3 l^2 + f4 l) u2 = 0,
// evaluated numerically: A_x = dA/dH * G by complex step, lambda-coefficients by sampling.
inline Reduced numeric_reduction(const Model& m, double h) {
    const auto a = m.A(h);
    const auto e = m.E(h);
    const double g = m.G(h);
    std::array<double, 4> ax{};
    for (int k = 0; k < 4; ++k) ax[k] = dstep([&](cd z) { return m.A(z)[k]; }, h) * g;

    const double p00 = a[0], p01 = a[1], p11 = a[3];
    const double t2 = -p00 / p01, t1 = -p11 / p01;  // T2 = [[1,0],[t2,1]], T1 = [[1,0],[t1,1]]
    const double det = a[0] * a[3] - a[1] * a[2];
    const auto row2 = [&](double lam) {
        // M = T1 R T2 with R = E - lam I - A_x; return (M10, M11)
        const double r00 = e[0] - lam - ax[0], r01 = e[1] - ax[1];
        const double r10 = e[2] - ax[2], r11 = e[3] - lam - ax[3];
        const double s00 = r00 + r01 * t2, s01 = r01;
        const double s10 = r10 + r11 * t2, s11 = r11;
        return std::array<double, 2>{t1 * s00 + s10, t1 * s01 + s11};
    };
    const auto r0 = row2(0.0), r1 = row2(1.0);
    Reduced out;
    out.f2 = r0[0] / det;
    out.f1 = (r1[0] - r0[0]) / det;
    out.f4 = -r0[1] / det;
    out.f3 = -(r1[1] - r0[1]) / det;
    return out;
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
    const auto step = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi, double whole,
                          double eps, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps)
            return left + right + (left + right - whole) / 15;
        return self(self, lo, mid, flo, flm, fmid, left, eps / 2, d - 1) +
               self(self, mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return step(step, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

} // namespace oracle
