#include "mlfpp/seasonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlfpp/errors.hpp"
#include "mlfpp/rng.hpp"

namespace mlfpp {
namespace {

void check_day(int d, const char* who) {
    if (d < 1 || d > 365)
        throw std::domain_error(std::string(who) + ": day must be in 1..365");
}

ReturnTimeSeries concat(const std::map<int, ReturnTimeSeries>& by_year,
                        const std::vector<int>& years) {
    ReturnTimeSeries out;
    for (int y : years) {
        const ReturnTimeSeries& f = by_year.at(y);
        out.return_times.insert(out.return_times.end(), f.return_times.begin(),
                                f.return_times.end());
        out.start_days.insert(out.start_days.end(), f.start_days.begin(),
                              f.start_days.end());
    }
    return out;
}

// Squared distances between two daily parameter curves, skipping days that
// are missing in either fit so the statistic stays comparable.
std::pair<double, double> curve_distance(const SeasonalFit& a, const SeasonalFit& b) {
    double db = 0.0, ds = 0.0;
    for (int j = 0; j < 365; ++j) {
        if (!a.daily[j].params || !b.daily[j].params) continue;
        double fb = a.daily[j].params->beta - b.daily[j].params->beta;
        double fs = a.daily[j].params->sigma - b.daily[j].params->sigma;
        db += fb * fb;
        ds += fs * fs;
    }
    return {db, ds};
}

}  // namespace

ReturnTimeSeries ReturnTimeSeries::make(std::vector<double> return_times,
                                        std::vector<int> start_days) {
    if (return_times.size() != start_days.size())
        throw std::invalid_argument("ReturnTimeSeries: length mismatch");
    for (double w : return_times)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("ReturnTimeSeries: return times must be > 0");
    for (int d : start_days) check_day(d, "ReturnTimeSeries");
    ReturnTimeSeries s;
    s.return_times = std::move(return_times);
    s.start_days = std::move(start_days);
    return s;
}

int circular_distance(int h, int j) {
    check_day(h, "circular_distance");
    check_day(j, "circular_distance");
    int d = std::abs(h - j);
    return std::min(d, 365 - d);
}

KernelWeights kernel_weights(int j, const std::vector<int>& start_days, double c) {
    check_day(j, "kernel_weights");
    if (!(c > 0.0)) throw std::invalid_argument("kernel_weights: bandwidth must be > 0");
    KernelWeights kw;
    kw.normalized.resize(start_days.size());
    double total = 0.0;
    for (std::size_t i = 0; i < start_days.size(); ++i) {
        double d = circular_distance(start_days[i], j);
        double u = d / c;
        double k = u < 1.0 ? 0.75 / c * (1.0 - u * u) : 0.0;
        kw.normalized[i] = k;
        total += k;
    }
    if (total <= 0.0)
        throw EmptyWindowError("kernel_weights: no observation within bandwidth of day " +
                               std::to_string(j));
    kw.raw_mass = total;
    for (double& w : kw.normalized) w /= total;
    return kw;
}

std::size_t SeasonalFit::failed_days() const {
    std::size_t n = 0;
    for (const DayFit& d : daily)
        if (!d.params) ++n;
    return n;
}

SeasonalFit fit_seasonal(const ReturnTimeSeries& series, double c, Method method,
                         const QuantileSet* qs, const OptimizerConfig& cfg) {
    if (series.size() == 0)
        throw std::invalid_argument("fit_seasonal: empty series");
    SeasonalFit fit;
    fit.daily.resize(365);
    fit.bandwidth_days = c;
    fit.method = method;
    for (int j = 1; j <= 365; ++j) {
        DayFit& day = fit.daily[j - 1];
        try {
            KernelWeights kw = kernel_weights(j, series.start_days, c);
            day.effective_n = kw.raw_mass;
            WeightedSample ws =
                WeightedSample::make(series.return_times, std::move(kw.normalized));
            EstimateResult r = estimate(method, ws, qs, cfg);
            day.params = r.params;
            day.converged = r.converged;
        } catch (const std::exception& e) {
            day.error = e.what();
        }
    }
    return fit;
}

double prob_within(const MlfParams& p, double horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("prob_within: horizon must be > 0");
    return cdf(p, horizon);
}

double return_time_quantile(const MlfParams& p, double alpha) {
    return quantile(p, alpha);
}

double weighted_freq_below(const ReturnTimeSeries& series, int j, double c,
                           double threshold) {
    if (!(threshold > 0.0))
        throw std::domain_error("weighted_freq_below: threshold must be > 0");
    KernelWeights kw = kernel_weights(j, series.start_days, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series.return_times[i] < threshold) acc += kw.normalized[i];
    return acc;
}

PermutationTestResult permutation_test(
    const std::map<int, ReturnTimeSeries>& series_by_year, double c,
    Method method, int B, std::uint64_t seed, const QuantileSet* qs,
    const OptimizerConfig& cfg, std::size_t first_half) {
    if (series_by_year.size() < 4)
        throw std::invalid_argument("permutation_test: need at least 4 years");
    if (B < 1) throw std::invalid_argument("permutation_test: B must be >= 1");

    std::vector<int> years;
    years.reserve(series_by_year.size());
    for (const auto& [y, s] : series_by_year) years.push_back(y);
    std::size_t half = first_half == 0 ? years.size() / 2 : first_half;
    if (half < 2 || half > years.size() - 2)
        throw std::invalid_argument(
            "permutation_test: each group needs at least 2 years");

    auto fit_halves = [&](const std::vector<int>& order) {
        std::vector<int> first(order.begin(), order.begin() + half);
        std::vector<int> second(order.begin() + half, order.end());
        SeasonalFit f1 = fit_seasonal(concat(series_by_year, first), c, method, qs, cfg);
        SeasonalFit f2 = fit_seasonal(concat(series_by_year, second), c, method, qs, cfg);
        if (f1.failed_days() > 182 || f2.failed_days() > 182)
            throw EstimationError("permutation_test: a half-split failed on most days");
        return curve_distance(f1, f2);
    };

    PermutationTestResult res;
    auto [ob, os] = fit_halves(years);  // chronological split
    res.observed_distance_beta = ob;
    res.observed_distance_sigma = os;

    Xoshiro256pp rng(seed);
    res.permutation_distances_beta.reserve(B);
    res.permutation_distances_sigma.reserve(B);
    std::vector<int> order = years;
    int ge_b = 0, ge_s = 0;
    for (int b = 0; b < B; ++b) {
        // Fisher-Yates with the reproducible stream.
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::size_t k = static_cast<std::size_t>(rng.next() % (i + 1));
            std::swap(order[i], order[k]);
        }
        auto [pb, ps] = fit_halves(order);
        res.permutation_distances_beta.push_back(pb);
        res.permutation_distances_sigma.push_back(ps);
        if (pb >= ob) ++ge_b;
        if (ps >= os) ++ge_s;
    }
    res.p_value_beta = (1.0 + ge_b) / (B + 1.0);
    res.p_value_sigma = (1.0 + ge_s) / (B + 1.0);
    res.reject_beta_at_5pct = res.p_value_beta <= 0.05;
    res.reject_sigma_at_5pct = res.p_value_sigma <= 0.05;
    return res;
}

}  // namespace mlfpp
