#pragma once

#include <optional>
#include <string>

namespace hydroshock {

// Parameters of the rescaled problem (left height fixed to 1).
struct ModelParams {
    double froude = 0.0;
    double h_right = 0.0;
    double nu = 0.0;  // 1/sqrt(h_right)

    // Validates 0 < F < 2 and 0 < H_R < 1; throws DomainError otherwise.
    static ModelParams make(double froude, double h_right);
};

enum class ProfileClass { smooth, degenerate, discontinuous };

std::string to_string(ProfileClass cls);

struct ReferencePoints {
    double h3 = 0.0;
    double hs = 0.0;
    std::optional<double> h_star;
    double hc = 0.0;
    double speed = 0.0;
    double q0 = 0.0;
};

// 2F^2 / (1 + 2F + sqrt(1 + 4F)): profiles with H_R above this value are smooth.
double class_threshold(double froude);

ProfileClass classify(double froude, double h_right);
ProfileClass classify(const ModelParams& p);

ReferencePoints reference_points(const ModelParams& p);

// Residual of the quadratic that H* solves; zero up to rounding.
double h_star_identity_residual(const ModelParams& p, double h_star);

// Right side G of the profile ODE H' = G(H) together with its first two H-derivatives.
// In the degenerate class the common factor H - H_R is cancelled so that G is regular
// at the corner.
class ProfileOde {
public:
    explicit ProfileOde(const ModelParams& p);

    double operator()(double h) const;
    double d1(double h) const;
    double d2(double h) const;

    const ModelParams& params() const { return params_; }
    const ReferencePoints& refs() const { return refs_; }
    ProfileClass profile_class() const { return cls_; }

private:
    struct Terms {
        double n, n1, n2, d, d1, d2;
    };
    Terms terms(double h) const;

    ModelParams params_;
    ReferencePoints refs_;
    ProfileClass cls_;
    double froude_sq_;
    double hs3_;
};

double profile_rhs(double h, const ModelParams& p);

} // namespace hydroshock
