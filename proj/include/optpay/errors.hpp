#pragma once

#include <stdexcept>
#include <string>

namespace optpay {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A target (price, budget) that no admissible payoff can reach.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}

    double lower() const { return lo_; }
    double upper() const { return hi_; }

private:
    double lo_;
    double hi_;
};

}  // namespace optpay
