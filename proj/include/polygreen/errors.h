#pragma once

#include <stdexcept>
#include <string>

namespace polygreen {

/// Argument outside the set where an operation is defined (pole of the
/// inversion, point inside a hole, parameter out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation on the diagonal x == y of a Green function.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Violated precondition of an experiment or configuration.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown: singular linear system, finite-difference stencil
/// leaving the domain, ...
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double condition = 0.0)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace polygreen
