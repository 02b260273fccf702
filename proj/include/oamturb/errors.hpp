#pragma once

#include <stdexcept>
#include <string>

namespace oamturb {

// Invalid argument values (negative lengths, q out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Base for failures that originate in a numerical procedure rather than in
// the caller's arguments. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A Gaussian block that should be integrated has a real part that is not
// positive definite.
class IntegrabilityError : public NumericalError {
public:
    IntegrabilityError(const std::string& what, std::string variable)
        : NumericalError(what), variable_(std::move(variable)) {}
    const std::string& variable() const noexcept { return variable_; }

private:
    std::string variable_;
};

// A trace or normalization integral diverges (e.g. the thin-crystal limit).
class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// An iterative or windowed estimate did not reach its tolerance.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A truncated series was asked for a degree beyond its order.
class CapacityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Density matrix failed a physical-validity check.
class InvalidStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Finite differences lost too many digits to cancellation.
class PrecisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Quadrature grid does not contain the integrand's support.
class InsufficientDomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Malformed sweep configuration or command-line values. Exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace oamturb
