#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hydroshock/rational_poly.hpp"

namespace hydroshock {

// Exact sample points together with the open interval (lo, hi) the root counts run over.
struct SampleSet {
    std::vector<mpq_class> points;
    mpq_class lo;
    std::optional<mpq_class> hi;  // absent: +infinity
};

// nu = 1 + k/1000 and (1100 + 99k)/1000, k = 1..100, over (1, inf).
SampleSet default_nu_samples();
// nu~ = k/201, k = 1..200, over (0, 1).
SampleSet default_nu_tilde_samples();
// n equally spaced interior points of (lo, hi), root counts over the same interval.
SampleSet uniform_samples(const mpq_class& lo, const mpq_class& hi, int n);

struct IneqCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct IneqCertificate {
    std::string name;
    SampleSet samples;
    mpq_class min_value;
    mpq_class argmin;
    int root_count = 0;                 // summed over every single-variable form checked
    std::vector<IneqCheck> checks;      // exact checks only
    std::optional<std::string> witness;
    // Floating-point evaluation of the original inequality and of the pre-squaring
    // sign conditions. Diagnostic only, never part of pass.
    int float_checks = 0;
    std::vector<std::string> float_failures;
    bool pass = false;
};

struct IneqOptions {
    bool inject_sign_flip = false;  // negate each final form (negative control)
};

IneqCertificate verify_Hstar_gt_Hc(const SampleSet& nu, const IneqOptions& opts = {});
IneqCertificate verify_Hstar_lower_bound(const SampleSet& nu, const IneqOptions& opts = {});
IneqCertificate verify_c1_bound(const SampleSet& nu_tilde, const IneqOptions& opts = {});

// The polynomials the certificates reduce to.
RationalPoly hstar_hc_final_poly();       // 72 nu^4 - 6 nu^3 - 6 nu^2 + 2 nu + 1
RationalPoly sharp_at(const RationalPoly& f_squared);  // #(F, nu~) with F^2 given as a polynomial in nu~
RationalPoly sharp_lower_end_factored();  // 4 nu~^3 (1-nu~)(nu~+1)^3 (4nu~^5 + ... + 6)
RationalPoly sharp_upper_end_factored();  // 4 (nu~^2+nu~-2)^2 (-nu~^4 - 2nu~^3 + 9nu~^2 + 10nu~ + 2)

std::string certificate_json(const IneqCertificate& c, int indent = 2);
// Array of certificates, schema hydroshock/1.
std::string certificates_json(const std::vector<IneqCertificate>& certs, int indent = 2);

} // namespace hydroshock
