#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlfpp/estimators.hpp"

namespace mlfpp {

// Return times (hours) paired with the calendar day (1..365) of the event
// opening each return interval.
struct ReturnTimeSeries {
    std::vector<double> return_times;
    std::vector<int> start_days;

    static ReturnTimeSeries make(std::vector<double> return_times,
                                 std::vector<int> start_days);
    std::size_t size() const { return return_times.size(); }
};

// d(h,j) = min(|h-j|, 365-|h-j|) on the 365-day wheel.
int circular_distance(int h, int j);

struct KernelWeights {
    std::vector<double> normalized;  // sums to 1
    double raw_mass;                 // unnormalized Epanechnikov total
};

// Epanechnikov weights k_c(j, t_i) = 3/(4c) * max(0, 1 - (d/c)^2), normalized
// per day. Throws EmptyWindowError when no observation lies within the
// kernel support.
KernelWeights kernel_weights(int j, const std::vector<int>& start_days, double c);

struct DayFit {
    std::optional<MlfParams> params;
    bool converged = false;
    double effective_n = 0.0;  // raw kernel mass
    std::string error;         // empty when the fit succeeded
};

struct SeasonalFit {
    std::vector<DayFit> daily;  // 365 entries, day j at index j-1
    double bandwidth_days = 0.0;
    Method method = Method::QB;

    std::size_t failed_days() const;
};

SeasonalFit fit_seasonal(const ReturnTimeSeries& series, double c, Method method,
                         const QuantileSet* qs = nullptr,
                         const OptimizerConfig& cfg = {});

// P(next event within `horizon` hours) = F(horizon).
double prob_within(const MlfParams& p, double horizon);

// Alias of the quantile function with reporting semantics.
double return_time_quantile(const MlfParams& p, double alpha);

// Kernel-weighted relative frequency of return times below `threshold`,
// computed with normalized weights.
double weighted_freq_below(const ReturnTimeSeries& series, int j, double c,
                           double threshold);

struct PermutationTestResult {
    double observed_distance_beta = 0.0;
    double observed_distance_sigma = 0.0;
    std::vector<double> permutation_distances_beta;
    std::vector<double> permutation_distances_sigma;
    double p_value_beta = 1.0;
    double p_value_sigma = 1.0;
    bool reject_beta_at_5pct = false;
    bool reject_sigma_at_5pct = false;
};

// Seasonal-stability permutation test. The chronological split of the years
// gives the observed distance; B random reorderings with the same split sizes
// give the reference distribution; p = (1 + #{perm >= obs}) / (B + 1).
// first_half = 0 selects the default half-count split; otherwise it is the
// number of (chronologically first) years in the first group, letting the
// caller place the split at a specific calendar year.
PermutationTestResult permutation_test(
    const std::map<int, ReturnTimeSeries>& series_by_year, double c,
    Method method, int B, std::uint64_t seed,
    const QuantileSet* qs = nullptr, const OptimizerConfig& cfg = {},
    std::size_t first_half = 0);

}  // namespace mlfpp
