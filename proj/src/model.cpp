#include "hydroshock/model.hpp"

#include <cmath>
#include <sstream>

#include "hydroshock/errors.hpp"

namespace hydroshock {

ModelParams ModelParams::make(double froude, double h_right) {
    if (!(froude > 0.0 && froude < 2.0)) {
        std::ostringstream os;
        os << "Froude number must lie in (0, 2), got " << froude;
        throw DomainError(os.str());
    }
    if (!(h_right > 0.0 && h_right < 1.0)) {
        std::ostringstream os;
        os << "right height must lie in (0, 1), got " << h_right;
        throw DomainError(os.str());
    }
    return ModelParams{froude, h_right, 1.0 / std::sqrt(h_right)};
}

std::string to_string(ProfileClass cls) {
    switch (cls) {
    case ProfileClass::smooth: return "smooth";
    case ProfileClass::degenerate: return "degenerate";
    case ProfileClass::discontinuous: return "discontinuous";
    }
    return "unknown";
}

double class_threshold(double froude) {
    return 2.0 * froude * froude / (1.0 + 2.0 * froude + std::sqrt(1.0 + 4.0 * froude));
}

ProfileClass classify(const ModelParams& p) {
    const double t = class_threshold(p.froude);
    if (std::abs(p.h_right - t) <= 1e-12 * t) return ProfileClass::degenerate;
    return p.h_right > t ? ProfileClass::smooth : ProfileClass::discontinuous;
}

ProfileClass classify(double froude, double h_right) {
    return classify(ModelParams::make(froude, h_right));
}

ReferencePoints reference_points(const ModelParams& p) {
    const double s = std::sqrt(p.h_right);
    const double nu = p.nu;
    const double f = p.froude;
    ReferencePoints r;
    r.speed = (1.0 + s + s * s) / (1.0 + s);
    r.q0 = s * s / (1.0 + s);
    r.h3 = r.q0 * r.q0 / p.h_right;
    r.hs = std::cbrt(f * f * r.q0 * r.q0);
    r.hc = f * std::sqrt(p.h_right * (p.h_right + s + 1.0)) / (std::sqrt(6.0) * (s + 1.0));
    if (classify(p) == ProfileClass::discontinuous) {
        const double disc = 8.0 * f * f * nu * nu * nu * nu + nu * nu + 2.0 * nu + 1.0;
        r.h_star = (-nu - 1.0 + std::sqrt(disc)) / (2.0 * (nu + 1.0)) * p.h_right;
    }
    return r;
}

double h_star_identity_residual(const ModelParams& p, double h_star) {
    const double s1 = std::sqrt(p.h_right) + 1.0;
    return h_star * h_star * s1 * s1 + h_star * p.h_right * s1 * s1
         - 2.0 * p.froude * p.froude * p.h_right;
}

ProfileOde::ProfileOde(const ModelParams& p)
    : params_(p), refs_(reference_points(p)), cls_(classify(p)),
      froude_sq_(p.froude * p.froude), hs3_(refs_.hs * refs_.hs * refs_.hs) {}

ProfileOde::Terms ProfileOde::terms(double h) const {
    const double hr = params_.h_right;
    const double h3 = refs_.h3;
    Terms t{};
    if (cls_ == ProfileClass::degenerate) {
        // (H-1)(H-H3) / (H^2 + H H_R + H_R^2)
        t.n = (h - 1.0) * (h - h3);
        t.n1 = 2.0 * h - 1.0 - h3;
        t.n2 = 2.0;
        t.d = h * h + h * hr + hr * hr;
        t.d1 = 2.0 * h + hr;
        t.d2 = 2.0;
        return t;
    }
    if (std::abs(h - refs_.hs) < 1e-10) {
        std::ostringstream os;
        os.precision(17);
        os << "profile ODE evaluated at the sonic point H=" << h;
        throw SingularityError(os.str());
    }
    const double a = h - 1.0, b = h - hr, e = h - h3;
    t.n = a * b * e;
    t.n1 = a * b + a * e + b * e;
    t.n2 = 2.0 * (a + b + e);
    t.d = h * h * h - hs3_;
    t.d1 = 3.0 * h * h;
    t.d2 = 6.0 * h;
    return t;
}

double ProfileOde::operator()(double h) const {
    const Terms t = terms(h);
    return froude_sq_ * t.n / t.d;
}

double ProfileOde::d1(double h) const {
    const Terms t = terms(h);
    return froude_sq_ * (t.n1 * t.d - t.n * t.d1) / (t.d * t.d);
}

double ProfileOde::d2(double h) const {
    const Terms t = terms(h);
    const double num1 = t.n1 * t.d - t.n * t.d1;
    return froude_sq_ * ((t.n2 * t.d - t.n * t.d2) / (t.d * t.d) - 2.0 * t.d1 * num1 / (t.d * t.d * t.d));
}

double profile_rhs(double h, const ModelParams& p) {
    return ProfileOde(p)(h);
}

} // namespace hydroshock
