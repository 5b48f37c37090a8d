#pragma once

#include <stdexcept>
#include <string>

namespace mlfpp {

// Thrown when a special-function evaluation fails to converge in any regime.
// Carries the regime that was attempted last and the partial estimate.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& msg, std::string regime, double partial)
        : std::runtime_error(msg), regime_(std::move(regime)), partial_(partial) {}

    const std::string& regime() const { return regime_; }
    double partial_estimate() const { return partial_; }

private:
    std::string regime_;
    double partial_;
};

// Degenerate or otherwise unusable sample (constant values, n too small, ...).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid weight vector (V >= 1, negative weights, ...).
class WeightingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A calendar day whose kernel window contains no observations.
class EmptyWindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mlfpp
