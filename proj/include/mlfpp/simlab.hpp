#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "mlfpp/estimators.hpp"

namespace mlfpp {

// One (beta, sigma, n) cell of the experiment grid.
struct SimSetting {
    double beta;
    double sigma;
    int n;
    int replicates;
    std::uint64_t seed;
};

struct MethodStats {
    double mse_beta = 0.0;
    double mse_sigma = 0.0;
    double rmse_beta = 0.0;
    double rmse_sigma = 0.0;
    double mean_time_ms = 0.0;
    int failures = 0;
    // Per-replicate estimates of the successful fits.
    std::vector<double> est_beta;
    std::vector<double> est_sigma;
};

struct SimResult {
    std::map<Method, MethodStats> per_method;
};

// Runs every requested method on `replicates` independent samples drawn from
// the setting's distribution. Deterministic for a fixed setting seed.
SimResult run_setting(const SimSetting& st, const std::vector<Method>& methods,
                      const std::map<Method, QuantileSet>& qs_per_method = {},
                      const OptimizerConfig& cfg = {});

// MSE(reference) / MSE(other); > 1 means `other` beats the reference.
double relative_efficiency(double mse_reference, double mse_other);

// Average over the grid of MSE_ML(beta)/MSE_QB(beta) + MSE_ML(sigma)/MSE_QB(sigma)
// with the QB estimator using the supplied quantile set.
double quantile_search_criterion(const std::vector<SimSetting>& grid,
                                 const QuantileSet& qs,
                                 const OptimizerConfig& cfg = {});

// The full 9 x 9 x 4 = 324-setting grid; per-setting seeds are derived from
// the master seed by index.
std::vector<SimSetting> paper_grid(int replicates, std::uint64_t master_seed);

struct SensitivityCurve {
    std::vector<double> x;
    std::vector<double> sc_beta;
    std::vector<double> sc_sigma;
    std::vector<bool> valid;  // false where the estimator failed (gap)
};

// SC(x, est) = (n+1) * (est(sample + {x}) - est(sample)) per parameter.
SensitivityCurve sensitivity_curve(Method method,
                                   const std::vector<double>& base_sample,
                                   const std::vector<double>& x_grid,
                                   const QuantileSet* qs = nullptr,
                                   const OptimizerConfig& cfg = {});

// Per-setting CSV: beta,sigma,n,method,mse_beta,mse_sigma,mean_time_ms,failures
void write_settings_csv(std::ostream& out, const std::vector<SimSetting>& settings,
                        const std::vector<SimResult>& results);
// JSON summary of the same sweep.
void write_settings_json(std::ostream& out, const std::vector<SimSetting>& settings,
                         const std::vector<SimResult>& results);

}  // namespace mlfpp
