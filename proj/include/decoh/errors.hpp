#pragma once

#include <stdexcept>
#include <string>

namespace decoh {

// bad arguments, bad ranges, bad config
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// quadrature or root finding could not deliver the requested accuracy
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |Lambda| fell below threshold on the real axis; `where` is the wavenumber
// (k, or z = k*lambda in the rate integrals) at which it happened
class NearSingularError : public NumericError {
public:
    NearSingularError(const std::string& what, double where)
        : NumericError(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

// saddle-point formula requested too close to the wavefront k_sp = k0
class FrontProximityError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace decoh
