#pragma once

#include <stdexcept>
#include <string>

namespace hydroshock {

// Parameters outside 0 < F < 2, 0 < H_R < 1, or an operation called on the wrong profile class.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation at (or within 1e-10 of) the sonic point Hs.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ODE or contour integration failed to meet its tolerance.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double where = 0.0)
        : std::runtime_error(what), where_(where) {}
    double where() const { return where_; }

private:
    double where_;
};

// The Evans function came too close to zero somewhere on the contour.
class ZeroOnContourError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Independent derivations disagree; indicates a transcription bug, never recoverable.
class DerivationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace hydroshock
