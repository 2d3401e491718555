#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hydroshock {

// Univariate polynomial with exact rational coefficients, ascending degree.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<mpq_class> ascending);
    static RationalPoly from_ints(std::initializer_list<long> ascending);
    static RationalPoly constant(const mpq_class& c);
    static RationalPoly x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class coeff(int k) const;
    const mpq_class& leading() const { return c_.back(); }

    mpq_class eval(const mpq_class& x) const;
    double eval(double x) const;
    RationalPoly derivative() const;
    RationalPoly compose(const RationalPoly& inner) const;
    RationalPoly pow(unsigned k) const;

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator*(const mpq_class& s, const RationalPoly& a);
    RationalPoly operator-() const;
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

    // Quotient and remainder of exact long division; throws std::domain_error on division by zero.
    static std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b);

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<mpq_class> c_;
};

// Number of distinct real roots in the open interval (a, b); b absent means +infinity.
// Roots sitting exactly on an endpoint are divided out exactly before the chain is built.
int sturm_root_count(const RationalPoly& p, const mpq_class& a, const std::optional<mpq_class>& b = std::nullopt);

} // namespace hydroshock
