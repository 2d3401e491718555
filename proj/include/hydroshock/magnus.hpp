#pragma once

#include <functional>

#include "hydroshock/mat2.hpp"

namespace hydroshock {

struct MagnusOptions {
    double tol = 1e-8;        // relative local error per step (step doubling)
    double h_init = 1e-2;
    double h_max = 0.0;       // <= 0: unbounded
    long max_steps = 2'000'000;
};

// Solution of y' = M(x) y represented as exp(log_scale) * y.
struct ModeIntegration {
    Vec2c y{};
    cplx log_scale{};
    double min_norm = 0.0;  // extremes of |y| seen before each renormalization
    double max_norm = 0.0;
    long steps = 0;
    long renormalizations = 0;
};

using CoefficientField = std::function<Mat2c(double)>;

// Fourth-order Magnus integration from x0 to x1 (either direction) with the closed-form 2x2
// exponential; the dominant exponential factor of every step is moved into log_scale so the
// stored vector stays O(1).
ModeIntegration integrate_mode(const CoefficientField& m, double x0, double x1, const Vec2c& y0,
                               cplx log_scale0, const MagnusOptions& opts = {});

// exp(omega) y written as exp(shift) * z with |z| = O(|y|).
struct ScaledProduct {
    Vec2c z;
    cplx shift;
};
ScaledProduct expm_apply(const Mat2c& omega, const Vec2c& y);

} // namespace hydroshock
