#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hydroshock/linearization.hpp"
#include "hydroshock/magnus.hpp"
#include "hydroshock/profile.hpp"

namespace hydroshock {

// Closed positively oriented contour made of line segments and circular arcs.
class Contour {
public:
    // Boundary of {Re z > 0, r_indent < |z| < R}.
    static Contour semicircle(double radius, double r_indent);
    static Contour circle(cplx center, double radius);

    cplx point(double t) const;  // t in [0, 1), arc-length parametrization
    // Initial parameter values: each piece gets a share proportional to its length, at least 8.
    std::vector<double> initial_parameters(int n) const;
    std::vector<cplx> vertices(int n) const;
    bool encloses(cplx z) const;
    // point(1 - t) == conj(point(t)); both t = 0 and t = 1/2 lie on the real axis.
    bool conjugate_symmetric() const { return center_.imag() == 0.0; }
    std::string description() const;

private:
    struct Piece {
        bool arc;
        cplx a, b;            // line endpoints
        cplx center;          // arc data
        double radius, theta0, theta1;
        double length;
    };
    std::vector<Piece> pieces_;
    double total_ = 0.0;
    enum class Kind { semicircle, circle } kind_ = Kind::circle;
    double radius_ = 0.0, indent_ = 0.0;
    cplx center_{};
};

// D(lambda) = mantissa * exp(log_scale); stored this way because |D| spans hundreds of decades.
struct EvansValue {
    cplx mantissa{};
    cplx log_scale{};
    double rel_modulus = 0.0;  // |D| relative to the norms of the factors it pairs
    bool near_branch_cut = false;

    cplx value() const;
    double phase() const;
    double log_modulus() const;
};

struct EvansOptions {
    double tol = 1e-8;  // Magnus local tolerance
};

// Limiting eigenvalue of A^{-1}(E - lambda) continued analytically in lambda, with the square
// root cut either along the segment joining the two branch points or along outward rays.
class LimitBranch {
public:
    enum class Cut { segment, radial };
    enum class Pick { largest_real, smallest_real };

    LimitBranch(const ModelParams& p, double h_limit, Pick pick);
    void set_cut(Cut cut);
    Cut cut() const { return cut_; }
    std::array<cplx, 2> branch_points() const { return {b1_, b2_}; }

    struct Mode {
        cplx gamma;
        Vec2c vector;  // first component 1
        bool near_cut;
    };
    Mode operator()(cplx lambda) const;

private:
    cplx root_discriminant(cplx lambda, bool& near_cut) const;
    void fix_sign();

    ModelParams p_;
    double h_;
    Pick pick_;
    Mat2 m0_, m1_;   // limit matrix = m0 + lambda m1
    double a2_ = 0;  // leading coefficient of the discriminant
    cplx b1_, b2_;
    Cut cut_ = Cut::segment;
    double sign_ = 1.0;
};

class EvansSolver {
public:
    explicit EvansSolver(const ShockProfile& profile, EvansOptions opts = {});

    // Chooses branch cuts compatible with the contour. When one limiting discriminant has a
    // branch point on each side of the contour no single-valued choice exists: strict mode throws
    // DomainError, otherwise the segment cut is kept. Returns the number of such sides.
    int configure_for(const Contour& contour, bool strict = true);

    EvansValue whole_line(cplx lambda) const;        // smooth profiles
    EvansValue lopatinsky(cplx lambda) const;        // discontinuous profiles
    EvansValue evaluate(cplx lambda) const;          // dispatch on class

    // w'(0) - (c1 + c2 lambda) w(0) for the decaying solution of the w-equation.
    EvansValue lopatinsky_w(cplx lambda) const;
    // Robin ratio w'(0)/w(0) obtained from the first-order mode and from the w-equation.
    cplx robin_ratio_from_v(cplx lambda) const;
    cplx robin_ratio_from_w(cplx lambda) const;

    ModeIntegration left_mode(cplx lambda) const;
    ModeIntegration right_mode(cplx lambda) const;
    ModeIntegration left_w_mode(cplx lambda) const;

    const ShockProfile& profile() const { return profile_; }
    const LimitBranch& left_branch() const { return left_; }
    const LimitBranch& right_branch() const { return right_; }

private:
    Mat2c coefficient(double x, cplx lambda) const;
    MagnusOptions magnus() const;

    const ShockProfile& profile_;
    EvansOptions opts_;
    Reduction reduction_;
    LimitBranch left_, right_;
    double h_max_;
    double c_, q0_, inv_fsq_;
};

struct WindingOptions {
    int initial_samples = 96;
    double max_phase_step = 0.78539816339744831;  // pi/4
    double max_log_modulus_step = 1.0;
    bool use_conjugate_symmetry = true;  // for real-symmetric D on symmetric contours
    int max_depth = 24;
    double zero_threshold = 1e-10;
    int threads = 1;
};

struct WindingSample {
    double t;
    cplx lambda;
    EvansValue value;
};

struct WindingReport {
    std::string contour;
    std::vector<WindingSample> samples;
    int winding = 0;
    double total_phase = 0.0;  // accumulated phase / 2pi
    double min_modulus = 0.0;
    double normalization_rate = 0.0;  // K in the analytic factor exp(-K lambda) divided out
    int straddling_cuts = 0;          // limiting discriminants with a branch point on each side
};

using EvansFunction = std::function<EvansValue(cplx)>;

WindingReport winding_number(const EvansFunction& d, const Contour& contour, const WindingOptions& opts = {});
WindingReport winding_number(const std::function<cplx(cplx)>& d, const Contour& contour,
                             const WindingOptions& opts = {});

struct CountOptions {
    EvansOptions evans;
    WindingOptions winding;
};

// Growth rate K of log|D| along the positive real axis between lambda = a and b. D behaves like
// exp(K lambda) for large |lambda|, so D exp(-K lambda) has the same zeros and far less phase to
// resolve on large contours.
double normalization_rate(const EvansSolver& solver, double a, double b);

// Winding of the (normalized) determinant of the profile along an arbitrary contour.
WindingReport evans_winding(const EvansSolver& solver, const Contour& contour, const CountOptions& opts = {},
                            bool strict_branches = true);

// Zeros of the (Evans or Evans-Lopatinsky) determinant inside the indented right half-disc.
WindingReport count_unstable(const ShockProfile& profile, double radius = 10.0, double r_indent = 0.01,
                             const CountOptions& opts = {});

std::string winding_json(const ShockProfile& profile, const WindingReport& report);
void write_winding_csv(const WindingReport& report, std::ostream& os);

} // namespace hydroshock
