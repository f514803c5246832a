#pragma once

#include <stdexcept>
#include <string>

namespace coorbital {

// Bad or missing physical parameters. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Input outside an operation's domain (collision, hyperbolic orbit, delta out of range).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Evaluation at the collision singularity of the mechanical functions.
class SingularityError : public DomainError {
public:
    explicit SingularityError(const std::string& what) : DomainError(what) {}
};

// Iteration or quadrature that failed to converge.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coorbital
