#pragma once

#include <string>
#include <vector>

#include "mlfpp/distribution.hpp"
#include "mlfpp/optimize.hpp"

namespace mlfpp {

// Return times with optional normalized weights. An empty weight vector
// means uniform 1/n.
struct WeightedSample {
    std::vector<double> values;
    std::vector<double> weights;

    static WeightedSample make(std::vector<double> values,
                               std::vector<double> weights = {});
    bool weighted() const { return !weights.empty(); }
};

enum class Method { LM, ML, CM, QLS, QB };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct EstimateResult {
    MlfParams params{1.0, 1.0};
    Method method = Method::LM;
    bool converged = false;
    double objective_value = 0.0;
    int iterations = 0;
    double wall_time_ms = 0.0;
    bool admissibility_warning = false;  // QB with a not-established quantile set
};

// Weighted empirical alpha-quantile: q = w_(l) with
// l = max{ h : sum_{i=h}^n kbar(t_(i)) >= 1 - alpha }.
double empirical_quantile(const WeightedSample& s, double alpha);

// Closed-form log-moment estimator.
EstimateResult estimate_lm(const WeightedSample& s);

// Weighted maximum likelihood; LM start.
EstimateResult estimate_ml(const WeightedSample& s, const OptimizerConfig& cfg = {});

// Cramer-von Mises minimum-distance estimator; cumulative-weight mid-ranks.
EstimateResult estimate_cm(const WeightedSample& s, const OptimizerConfig& cfg = {});

// Quantile least squares: sum of squared gaps between theoretical and
// empirical quantiles.
EstimateResult estimate_qls(const WeightedSample& s,
                            const QuantileSet& qs = QuantileSet::qls_default(),
                            const OptimizerConfig& cfg = {});

// Quantile-based estimator: squared CDF gaps at the empirical quantiles.
EstimateResult estimate_qb(const WeightedSample& s,
                           const QuantileSet& qs = QuantileSet::qb_default(),
                           const OptimizerConfig& cfg = {});

EstimateResult estimate(Method m, const WeightedSample& s,
                        const QuantileSet* qs = nullptr,
                        const OptimizerConfig& cfg = {});

}  // namespace mlfpp
