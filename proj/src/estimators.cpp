#include "mlfpp/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlfpp/errors.hpp"

namespace mlfpp {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBig = 1e100;

struct SortedSample {
    std::vector<double> values;   // ascending
    std::vector<double> weights;  // normalized, aligned with values
};

SortedSample sorted(const WeightedSample& s) {
    std::size_t n = s.values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
    SortedSample out;
    out.values.reserve(n);
    out.weights.reserve(n);
    double uniform = 1.0 / static_cast<double>(n);
    for (std::size_t i : idx) {
        out.values.push_back(s.values[i]);
        out.weights.push_back(s.weighted() ? s.weights[i] : uniform);
    }
    return out;
}

// At least two distinct values must carry positive weight, otherwise every
// objective is flat and the log-moment formulas degenerate.
void require_estimable(const WeightedSample& s) {
    if (s.values.size() < 2)
        throw EstimationError("sample must contain at least 2 values");
    double first = std::numeric_limits<double>::quiet_NaN();
    bool distinct = false;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        double w = s.weighted() ? s.weights[i] : 1.0;
        if (w <= 0.0) continue;
        if (std::isnan(first)) {
            first = s.values[i];
        } else if (s.values[i] != first) {
            distinct = true;
            break;
        }
    }
    if (!distinct)
        throw EstimationError("degenerate sample: fewer than 2 distinct weighted values");
}

class Timer {
public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0_).count();
    }
private:
    std::chrono::steady_clock::time_point t0_;
};

template <typename F>
EstimateResult run_optimizer(Method m, F&& objective, const MlfParams& start,
                             const OptimizerConfig& cfg, const Timer& timer) {
    auto guarded = [&](double beta, double sigma) {
        try {
            double v = objective(beta, sigma);
            return std::isfinite(v) ? v : kBig;
        } catch (const std::exception&) {
            return kBig;
        }
    };
    auto [params, diag] = minimize_bounded(guarded, start, cfg);
    EstimateResult r;
    r.params = params;
    r.method = m;
    r.converged = diag.converged && diag.objective < kBig;
    r.objective_value = diag.objective;
    r.iterations = diag.iterations;
    r.wall_time_ms = timer.ms();
    return r;
}

MlfParams lm_start(const WeightedSample& s, const OptimizerConfig& cfg) {
    EstimateResult lm = estimate_lm(s);
    double b = std::min(std::max(lm.params.beta, cfg.beta_lo), cfg.beta_hi);
    double sg = std::max(lm.params.sigma, cfg.sigma_lower);
    return MlfParams(b, sg);
}

}  // namespace

WeightedSample WeightedSample::make(std::vector<double> values,
                                    std::vector<double> weights) {
    if (values.empty()) throw std::invalid_argument("WeightedSample: empty sample");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("WeightedSample: values must be finite and > 0");
    if (!weights.empty()) {
        if (weights.size() != values.size())
            throw std::invalid_argument("WeightedSample: length mismatch");
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw WeightingError("weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw WeightingError("weights must sum to 1");
    }
    WeightedSample s;
    s.values = std::move(values);
    s.weights = std::move(weights);
    return s;
}

Method method_from_string(const std::string& name) {
    if (name == "lm") return Method::LM;
    if (name == "ml") return Method::ML;
    if (name == "cm") return Method::CM;
    if (name == "qls") return Method::QLS;
    if (name == "qb") return Method::QB;
    throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method m) {
    switch (m) {
        case Method::LM: return "lm";
        case Method::ML: return "ml";
        case Method::CM: return "cm";
        case Method::QLS: return "qls";
        case Method::QB: return "qb";
    }
    return "?";
}

double empirical_quantile(const WeightedSample& s, double alpha) {
    if (s.values.empty()) throw std::domain_error("empirical_quantile: empty sample");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("empirical_quantile: alpha must be in (0,1)");
    SortedSample ss = sorted(s);
    std::size_t n = ss.values.size();
    // l = max{ h : suffix weight sum from h >= 1 - alpha }
    double suffix = 0.0;
    for (std::size_t h = n; h >= 1; --h) {
        suffix += ss.weights[h - 1];
        if (suffix >= 1.0 - alpha) return ss.values[h - 1];
    }
    return ss.values[0];
}

EstimateResult estimate_lm(const WeightedSample& s) {
    Timer timer;
    require_estimable(s);
    std::size_t n = s.values.size();
    double uniform = 1.0 / static_cast<double>(n);

    double mu = 0.0, V = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = s.weighted() ? s.weights[i] : uniform;
        mu += w * std::log(s.values[i]);
        V += w * w;
    }
    if (V >= 1.0) throw WeightingError("estimate_lm: sum of squared weights >= 1");
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = s.weighted() ? s.weights[i] : uniform;
        double d = std::log(s.values[i]) - mu;
        s2 += w * d * d;
    }
    s2 /= (1.0 - V);
    if (!(s2 > 0.0)) throw EstimationError("estimate_lm: zero log-variance");

    double beta = std::min(kPi * std::sqrt(2.0) / std::sqrt(kPi * kPi + 6.0 * s2), 1.0);
    double sigma = std::exp(mu + kEulerGamma);

    EstimateResult r;
    r.params = MlfParams(beta, sigma);
    r.method = Method::LM;
    r.converged = true;
    r.objective_value = 0.0;
    r.iterations = 0;
    r.wall_time_ms = timer.ms();
    return r;
}

EstimateResult estimate_ml(const WeightedSample& s, const OptimizerConfig& cfg) {
    Timer timer;
    require_estimable(s);
    std::size_t n = s.values.size();
    double uniform = 1.0 / static_cast<double>(n);
    auto neg_loglik = [&](double beta, double sigma) {
        MlfParams p(beta, sigma);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = s.weighted() ? s.weights[i] : uniform;
            if (w == 0.0) continue;
            acc -= w * log_pdf(p, s.values[i]);
        }
        return acc;
    };
    EstimateResult r = run_optimizer(Method::ML, neg_loglik, lm_start(s, cfg), cfg, timer);
    r.objective_value = -r.objective_value;  // report attained log-likelihood
    return r;
}

EstimateResult estimate_cm(const WeightedSample& s, const OptimizerConfig& cfg) {
    Timer timer;
    require_estimable(s);
    SortedSample ss = sorted(s);
    std::size_t n = ss.values.size();
    // Cumulative-weight mid-ranks C_i - kbar_(i)/2; equal to (2i-1)/(2n)
    // under uniform weights.
    std::vector<double> mid(n);
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += ss.weights[i];
        mid[i] = cum - 0.5 * ss.weights[i];
    }
    auto objective = [&](double beta, double sigma) {
        MlfParams p(beta, sigma);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ss.weights[i] == 0.0) continue;
            double d = mid[i] - cdf(p, ss.values[i]);
            acc += ss.weights[i] * static_cast<double>(n) * d * d;
        }
        return acc;
    };
    return run_optimizer(Method::CM, objective, lm_start(s, cfg), cfg, timer);
}

EstimateResult estimate_qls(const WeightedSample& s, const QuantileSet& qs,
                            const OptimizerConfig& cfg) {
    Timer timer;
    require_estimable(s);
    std::vector<double> q_hat;
    q_hat.reserve(qs.alphas.size());
    for (double a : qs.alphas) q_hat.push_back(empirical_quantile(s, a));
    auto objective = [&](double beta, double sigma) {
        MlfParams p(beta, sigma);
        double acc = 0.0;
        for (std::size_t i = 0; i < qs.alphas.size(); ++i) {
            double d = quantile(p, qs.alphas[i]) - q_hat[i];
            acc += d * d;
        }
        return acc;
    };
    return run_optimizer(Method::QLS, objective, lm_start(s, cfg), cfg, timer);
}

EstimateResult estimate_qb(const WeightedSample& s, const QuantileSet& qs,
                           const OptimizerConfig& cfg) {
    Timer timer;
    require_estimable(s);
    std::vector<double> q_hat;
    q_hat.reserve(qs.alphas.size());
    for (double a : qs.alphas) q_hat.push_back(empirical_quantile(s, a));
    auto objective = [&](double beta, double sigma) {
        MlfParams p(beta, sigma);
        double acc = 0.0;
        for (std::size_t i = 0; i < qs.alphas.size(); ++i) {
            double d = qs.alphas[i] - cdf(p, q_hat[i]);
            acc += d * d;
        }
        return acc;
    };
    EstimateResult r = run_optimizer(Method::QB, objective, lm_start(s, cfg), cfg, timer);
    r.admissibility_warning =
        check_quantile_admissibility(qs) == Admissibility::NotEstablished;
    return r;
}

EstimateResult estimate(Method m, const WeightedSample& s, const QuantileSet* qs,
                        const OptimizerConfig& cfg) {
    switch (m) {
        case Method::LM: return estimate_lm(s);
        case Method::ML: return estimate_ml(s, cfg);
        case Method::CM: return estimate_cm(s, cfg);
        case Method::QLS: return estimate_qls(s, qs ? *qs : QuantileSet::qls_default(), cfg);
        case Method::QB: return estimate_qb(s, qs ? *qs : QuantileSet::qb_default(), cfg);
    }
    throw std::logic_error("estimate: unreachable");
}

}  // namespace mlfpp
