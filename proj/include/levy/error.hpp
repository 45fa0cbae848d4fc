#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument lies on a pole of a special function (e.g. Gamma at 0, -1, ...).
class PoleError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside the range in which a formula or estimator is defined.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// The operation is stated for alpha in (1,2) and alpha == 2 was supplied.
class DegenerateAlphaError : public RegimeError {
public:
    using RegimeError::RegimeError;
};

/// The requested constant has no closed form (r and q).
class NoClosedFormError : public Error {
public:
    using Error::Error;
};

/// Unknown constant / check / command name.
class UnknownNameError : public Error {
public:
    using Error::Error;
};

/// A Levy model fails the integrability gate for 1/(1+Psi) or (1 ^ z^2) nu(dz).
class IntegrabilityError : public Error {
public:
    using Error::Error;
};

/// A test function or level lies outside the spatial grid of a local-time field.
class SupportError : public Error {
public:
    using Error::Error;
};

/// Numerical integration did not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

}  // namespace levy
