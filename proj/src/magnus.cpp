#include "hydroshock/magnus.hpp"

#include <algorithm>
#include <cmath>

#include "hydroshock/errors.hpp"

namespace hydroshock {

ScaledProduct expm_apply(const Mat2c& omega, const Vec2c& y) {
    const cplx half_tr = 0.5 * omega.trace();
    Mat2c n = omega;
    n(0, 0) -= half_tr;
    n(1, 1) -= half_tr;
    // n is traceless, so n^2 = delta I
    const cplx delta = n(0, 0) * n(0, 0) + n(0, 1) * n(1, 0);
    cplx r = std::sqrt(delta);
    if (r.real() < 0.0) r = -r;
    const cplx e = std::exp(-2.0 * r);
    cplx sinh_ratio;  // (1 - e^{-2r}) / (2r)
    if (std::abs(r) < 1e-3) {
        sinh_ratio = 1.0 + r * (-1.0 + r * (2.0 / 3.0 + r * (-1.0 / 3.0 + r * (2.0 / 15.0 - r * 2.0 / 45.0))));
    } else {
        sinh_ratio = (1.0 - e) / (2.0 * r);
    }
    const cplx cosh_part = 0.5 * (1.0 + e);
    const Vec2c ny = n * y;
    return {{cosh_part * y[0] + sinh_ratio * ny[0], cosh_part * y[1] + sinh_ratio * ny[1]}, half_tr + r};
}

namespace {

constexpr double kGauss = 0.28867513459481288225;  // sqrt(3)/6
constexpr double kComm = 0.14433756729740644113;   // sqrt(3)/12

ScaledProduct magnus_step(const CoefficientField& m, double x, double h, const Vec2c& y) {
    const Mat2c a1 = m(x + (0.5 - kGauss) * h);
    const Mat2c a2 = m(x + (0.5 + kGauss) * h);
    const Mat2c comm = a2 * a1;
    const Mat2c comm2 = a1 * a2;
    Mat2c omega;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            omega(i, j) = 0.5 * h * (a1(i, j) + a2(i, j)) + kComm * h * h * (comm(i, j) - comm2(i, j));
    return expm_apply(omega, y);
}

} // namespace

ModeIntegration integrate_mode(const CoefficientField& m, double x0, double x1, const Vec2c& y0,
                               cplx log_scale0, const MagnusOptions& opts) {
    ModeIntegration out;
    out.y = y0;
    out.log_scale = log_scale0;
    {
        const double n0 = norm(y0);
        out.min_norm = out.max_norm = n0;
    }
    const double dir = x1 >= x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double h = std::min(opts.h_init, span);
    if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
    double x = x0;
    double done = 0.0;
    while (done < span) {
        if (++out.steps > opts.max_steps) throw IntegrationError("mode integration exceeded step budget", x);
        h = std::min(h, span - done);
        const ScaledProduct full = magnus_step(m, x, dir * h, out.y);
        const ScaledProduct half1 = magnus_step(m, x, 0.5 * dir * h, out.y);
        const ScaledProduct half2 = magnus_step(m, x + 0.5 * dir * h, 0.5 * dir * h, half1.z);
        const cplx shift = half1.shift + half2.shift;
        const cplx rel = std::exp(full.shift - shift);
        const double scale = norm(half2.z);
        const double err = std::sqrt(std::norm(full.z[0] * rel - half2.z[0]) + std::norm(full.z[1] * rel - half2.z[1]))
                         / std::max(scale, 1e-300);
        if (!std::isfinite(err)) throw IntegrationError("non-finite value in mode integration", x);
        if (err > opts.tol && h < 1e-13 * std::max(1.0, std::abs(x)))
            throw IntegrationError("mode integration step size underflow", x);
        if (err <= opts.tol) {
            done += h;
            x = done >= span ? x1 : x + dir * h;
            out.y = half2.z;
            out.log_scale += shift;
            const double nrm = norm(out.y);
            out.min_norm = std::min(out.min_norm, nrm);
            out.max_norm = std::max(out.max_norm, nrm);
            if (nrm > 1e2 || nrm < 1e-2) {
                out.y[0] /= nrm;
                out.y[1] /= nrm;
                out.log_scale += std::log(nrm);
                ++out.renormalizations;
            }
        }
        const double fac = err > 0.0 ? 0.9 * std::pow(opts.tol / err, 0.2) : 4.0;
        h *= std::clamp(fac, 0.2, 4.0);
        if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
    }
    return out;
}

} // namespace hydroshock
