#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace reltrace {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Coupling strong enough that the l-wave "falls to the center".
class CriticalCouplingError : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidQuantumNumbers : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller broke a precondition that is not a domain question
/// (mismatched grids, malformed configuration, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to reach its tolerance. Carries the last
/// iterate so the caller can report it.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what, std::vector<double> last_iterate = {})
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

/// Singular Hessian or Newton matrix: the torus is degenerate and the
/// integrable-system trace formula does not apply.
class DegenerateTorusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace reltrace
