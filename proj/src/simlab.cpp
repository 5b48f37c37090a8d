#include "mlfpp/simlab.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "mlfpp/errors.hpp"
#include "mlfpp/rng.hpp"

namespace mlfpp {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SimResult run_setting(const SimSetting& st, const std::vector<Method>& methods,
                      const std::map<Method, QuantileSet>& qs_per_method,
                      const OptimizerConfig& cfg) {
    if (st.n < 2 || st.replicates < 1)
        throw std::invalid_argument("run_setting: need n >= 2 and replicates >= 1");
    MlfParams truth(st.beta, st.sigma);

    SimResult res;
    for (Method m : methods) res.per_method[m];

    for (int rep = 0; rep < st.replicates; ++rep) {
        std::vector<double> data =
            sample(truth, static_cast<std::size_t>(st.n), derive_seed(st.seed, rep));
        WeightedSample ws = WeightedSample::make(data);
        for (Method m : methods) {
            MethodStats& stats = res.per_method[m];
            auto it = qs_per_method.find(m);
            const QuantileSet* qs = it == qs_per_method.end() ? nullptr : &it->second;
            try {
                EstimateResult r = estimate(m, ws, qs, cfg);
                if (!r.converged) {
                    ++stats.failures;
                    continue;
                }
                stats.est_beta.push_back(r.params.beta);
                stats.est_sigma.push_back(r.params.sigma);
                stats.mean_time_ms += r.wall_time_ms;
            } catch (const std::exception&) {
                ++stats.failures;
            }
        }
    }

    for (auto& [m, stats] : res.per_method) {
        std::size_t k = stats.est_beta.size();
        if (k > 0) {
            double sb = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                double db = stats.est_beta[i] - st.beta;
                double ds = stats.est_sigma[i] - st.sigma;
                sb += db * db;
                ss += ds * ds;
            }
            stats.mse_beta = sb / k;
            stats.mse_sigma = ss / k;
            stats.rmse_beta = std::sqrt(stats.mse_beta);
            stats.rmse_sigma = std::sqrt(stats.mse_sigma);
            stats.mean_time_ms /= static_cast<double>(k);
        }
    }
    return res;
}

double relative_efficiency(double mse_reference, double mse_other) {
    if (!std::isfinite(mse_reference) || !std::isfinite(mse_other))
        throw std::invalid_argument("relative_efficiency: non-finite MSE");
    if (!(mse_other > 0.0))
        throw EstimationError("relative_efficiency: zero MSE in denominator");
    return mse_reference / mse_other;
}

double quantile_search_criterion(const std::vector<SimSetting>& grid,
                                 const QuantileSet& qs, const OptimizerConfig& cfg) {
    if (grid.empty())
        throw std::invalid_argument("quantile_search_criterion: empty grid");
    std::map<Method, QuantileSet> qmap{{Method::QB, qs}};
    double acc = 0.0;
    for (const SimSetting& st : grid) {
        SimResult r = run_setting(st, {Method::ML, Method::QB}, qmap, cfg);
        const MethodStats& ml = r.per_method.at(Method::ML);
        const MethodStats& qb = r.per_method.at(Method::QB);
        acc += relative_efficiency(ml.mse_beta, qb.mse_beta) +
               relative_efficiency(ml.mse_sigma, qb.mse_sigma);
    }
    return acc / static_cast<double>(grid.size());
}

std::vector<SimSetting> paper_grid(int replicates, std::uint64_t master_seed) {
    static const double betas[] = {0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
    static const double sigmas[] = {25, 50, 100, 250, 500, 750, 1000, 1500, 2000};
    static const int ns[] = {200, 500, 1000, 5000};
    std::vector<SimSetting> grid;
    grid.reserve(324);
    std::uint64_t index = 0;
    for (double b : betas)
        for (double s : sigmas)
            for (int n : ns)
                grid.push_back({b, s, n, replicates, derive_seed(master_seed, index++)});
    return grid;
}

SensitivityCurve sensitivity_curve(Method method,
                                   const std::vector<double>& base_sample,
                                   const std::vector<double>& x_grid,
                                   const QuantileSet* qs,
                                   const OptimizerConfig& cfg) {
    WeightedSample base = WeightedSample::make(base_sample);
    EstimateResult base_fit = estimate(method, base, qs, cfg);
    double n1 = static_cast<double>(base_sample.size() + 1);

    SensitivityCurve curve;
    for (double x : x_grid) {
        curve.x.push_back(x);
        try {
            std::vector<double> augmented = base_sample;
            augmented.push_back(x);
            EstimateResult r = estimate(method, WeightedSample::make(augmented), qs, cfg);
            curve.sc_beta.push_back(n1 * (r.params.beta - base_fit.params.beta));
            curve.sc_sigma.push_back(n1 * (r.params.sigma - base_fit.params.sigma));
            curve.valid.push_back(r.converged);
        } catch (const std::exception&) {
            curve.sc_beta.push_back(0.0);
            curve.sc_sigma.push_back(0.0);
            curve.valid.push_back(false);
        }
    }
    return curve;
}

void write_settings_csv(std::ostream& out, const std::vector<SimSetting>& settings,
                        const std::vector<SimResult>& results) {
    out << "beta,sigma,n,method,mse_beta,mse_sigma,mean_time_ms,failures\n";
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const SimSetting& st = settings[i];
        for (const auto& [m, stats] : results[i].per_method) {
            out << fmt17(st.beta) << ',' << fmt17(st.sigma) << ',' << st.n << ','
                << method_name(m) << ',' << fmt17(stats.mse_beta) << ','
                << fmt17(stats.mse_sigma) << ',' << fmt17(stats.mean_time_ms) << ','
                << stats.failures << '\n';
        }
    }
}

void write_settings_json(std::ostream& out, const std::vector<SimSetting>& settings,
                         const std::vector<SimResult>& results) {
    nlohmann::json root = nlohmann::json::array();
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const SimSetting& st = settings[i];
        nlohmann::json cell;
        cell["beta"] = st.beta;
        cell["sigma"] = st.sigma;
        cell["n"] = st.n;
        cell["replicates"] = st.replicates;
        for (const auto& [m, stats] : results[i].per_method) {
            nlohmann::json ms;
            ms["mse_beta"] = stats.mse_beta;
            ms["mse_sigma"] = stats.mse_sigma;
            ms["rmse_beta"] = stats.rmse_beta;
            ms["rmse_sigma"] = stats.rmse_sigma;
            ms["mean_time_ms"] = stats.mean_time_ms;
            ms["failures"] = stats.failures;
            cell["methods"][method_name(m)] = ms;
        }
        root.push_back(cell);
    }
    out << root.dump(2) << '\n';
}

}  // namespace mlfpp
