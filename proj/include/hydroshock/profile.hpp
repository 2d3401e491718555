#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hydroshock/model.hpp"

namespace hydroshock {

struct ProfileOptions {
    double half_width = 0.0;  // <= 0 selects it from the decay rates
    int n_points = 4000;      // caps the step at 2*half_width/n_points
    double tol = 1e-9;        // bound on the scaled ODE residual
};

struct ResidualDiagnostics {
    double max_residual = 0.0;
    double worst_x = 0.0;
    std::size_t n_checked = 0;
};

// Sampled traveling wave connecting H=1 at -inf to H_R at +inf.
// For discontinuous profiles the node x=0 carries the left state H* and H = H_R for x > 0.
class ShockProfile {
public:
    // Builds a profile from raw samples; Q is derived from H. Throws DomainError if x is
    // not strictly increasing or a discontinuous profile has no node at x = 0.
    ShockProfile(const ModelParams& params, std::vector<double> x, std::vector<double> h);

    const ModelParams& params() const { return ode_.params(); }
    const ReferencePoints& refs() const { return ode_.refs(); }
    ProfileClass profile_class() const { return ode_.profile_class(); }
    const ProfileOde& ode() const { return ode_; }
    bool certifiable() const { return profile_class() != ProfileClass::degenerate; }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& h() const { return h_; }
    const std::vector<double>& q() const { return q_; }
    std::size_t size() const { return x_.size(); }
    double left_edge() const { return x_.front(); }
    double right_edge() const { return x_.back(); }

    // Index of the x=0 node holding H(0-) = H*, discontinuous profiles only.
    std::optional<std::size_t> subshock_index() const { return subshock_; }
    double h_minus() const;  // H(0-), discontinuous only
    double h_plus() const;   // H(0+), discontinuous only

    // Quintic Hermite interpolant built from H, G(H) and G'(H)G(H) at the nodes.
    double height(double x) const;
    double height_slope(double x) const;

    // Midpoint defect |p' - G(p)| / (1 + |G(p)|) of the interpolant on every non-constant interval.
    ResidualDiagnostics residual() const;

private:
    struct Local {
        std::size_t i;
        bool constant;
    };
    Local locate(double x) const;

    ProfileOde ode_;
    std::vector<double> x_, h_, q_, dh_, ddh_;
    std::optional<std::size_t> subshock_;
};

// Default half-width: the slower far-field decay rate brings the truncation error below 1e-10.
double default_half_width(const ModelParams& p);

// Integrates the profile ODE from the anchor H(0) = (1+H_R)/2, or H(0-) = H* when a subshock
// is present. Throws IntegrationError when the residual exceeds opts.tol.
ShockProfile integrate_profile(const ModelParams& p, const ProfileOptions& opts = {});

struct LaxReport {
    double mass_residual = 0.0;      // c[H] - [Q]
    double momentum_residual = 0.0;  // c[Q] - [Q^2/H + H^2/(2F^2)]
    double lambda1_minus = 0.0, lambda2_minus = 0.0;
    double lambda1_plus = 0.0, lambda2_plus = 0.0;
    double speed = 0.0;
    std::vector<std::string> failed;
    bool pass() const { return failed.empty(); }
};

LaxReport lax_check(const ShockProfile& profile);

void write_profile_csv(const ShockProfile& profile, std::ostream& os);
std::string profile_json(const ShockProfile& profile);

} // namespace hydroshock
