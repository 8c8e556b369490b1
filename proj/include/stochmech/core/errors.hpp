#pragma once

#include <stdexcept>
#include <string>

namespace stochmech {

/// Invalid input: a value outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    DomainError(std::string field, const std::string& what)
        : std::domain_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A solver failed (no bracket, step underflow, non-convergence, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stochmech
