#pragma once

#include <stdexcept>
#include <string>

namespace allelofear {

/// Invalid model parameters or out-of-range arguments.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A stated precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: step-size underflow, divergence, defective eigenproblem.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace allelofear
