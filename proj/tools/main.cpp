#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlfpp/errors.hpp"
#include "mlfpp/estimators.hpp"
#include "mlfpp/pot.hpp"
#include "mlfpp/rng.hpp"
#include "mlfpp/seasonal.hpp"
#include "mlfpp/simlab.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConverge = 2;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

// Return-time CSV: header names a `return_time_hours` column plus optional
// `start_day`, `weight`, and `year` columns in any order.
struct ReturnTimeInput {
    std::vector<double> return_times;
    std::vector<int> start_days;  // empty when the column is absent
    std::vector<double> weights;  // empty when the column is absent
    std::vector<int> years;       // empty when the column is absent
};

ReturnTimeInput read_return_time_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        throw std::invalid_argument("empty input file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> cols = split_fields(header);
    int c_rt = -1, c_day = -1, c_w = -1, c_year = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "return_time_hours") c_rt = static_cast<int>(i);
        else if (cols[i] == "start_day") c_day = static_cast<int>(i);
        else if (cols[i] == "weight") c_w = static_cast<int>(i);
        else if (cols[i] == "year") c_year = static_cast<int>(i);
        else throw std::invalid_argument("unknown column '" + cols[i] + "' in header");
    }
    if (c_rt < 0)
        throw std::invalid_argument("missing 'return_time_hours' column");

    ReturnTimeInput out;
    std::string line;
    for (int lineno = 2; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split_fields(line);
        try {
            if (f.size() != cols.size()) throw std::invalid_argument("field count");
            out.return_times.push_back(std::stod(f[c_rt]));
            if (c_day >= 0) out.start_days.push_back(std::stoi(f[c_day]));
            if (c_w >= 0) out.weights.push_back(std::stod(f[c_w]));
            if (c_year >= 0) out.years.push_back(std::stoi(f[c_year]));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed record on line " +
                                        std::to_string(lineno));
        }
    }
    if (out.return_times.empty())
        throw std::invalid_argument("no data rows in input");
    return out;
}

bool is_observation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::string header;
    std::getline(in, header);
    return header.rfind("timestamp", 0) == 0;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);  // LF line endings
    if (!out)
        throw std::invalid_argument("cannot write output file: " + (dir / name).string());
    return out;
}

std::optional<mlfpp::QuantileSet> parse_quantiles(const std::vector<double>& qs) {
    if (qs.empty()) return std::nullopt;
    return mlfpp::QuantileSet(qs);
}

std::vector<mlfpp::Method> parse_methods(const std::string& csv) {
    std::vector<mlfpp::Method> out;
    for (const std::string& name : split_fields(csv))
        if (!name.empty()) out.push_back(mlfpp::method_from_string(name));
    if (out.empty()) throw std::invalid_argument("method list must not be empty");
    return out;
}

// ---------------------------------------------------------------- fit ------

int cmd_fit(const std::string& input, const std::string& method_name,
            const std::vector<double>& quantiles, const std::string& format) {
    std::ifstream in = open_input(input);
    ReturnTimeInput data = read_return_time_csv(in);
    mlfpp::WeightedSample ws =
        mlfpp::WeightedSample::make(data.return_times, data.weights);
    mlfpp::Method m = mlfpp::method_from_string(method_name);
    std::optional<mlfpp::QuantileSet> qs = parse_quantiles(quantiles);

    mlfpp::EstimateResult r = mlfpp::estimate(m, ws, qs ? &*qs : nullptr);
    if (r.admissibility_warning)
        std::cerr << "warning: quantile set admissibility not established\n";

    if (format == "json") {
        json j;
        j["method"] = mlfpp::method_name(r.method);
        j["beta"] = r.params.beta;
        j["sigma"] = r.params.sigma;
        j["objective"] = r.objective_value;
        j["converged"] = r.converged;
        j["iterations"] = r.iterations;
        j["wall_time_ms"] = r.wall_time_ms;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "method " << mlfpp::method_name(r.method) << '\n'
                  << "beta " << fmt17(r.params.beta) << '\n'
                  << "sigma " << fmt17(r.params.sigma) << '\n'
                  << "objective " << fmt17(r.objective_value) << '\n'
                  << "converged " << (r.converged ? "yes" : "no") << '\n'
                  << "wall_time_ms " << fmt17(r.wall_time_ms) << '\n';
    }
    return r.converged ? kExitOk : kExitNoConverge;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(bool paper_grid, const std::vector<double>& betas,
              const std::vector<double>& sigmas, const std::vector<int>& ns,
              int replicates, const std::string& methods_csv,
              std::uint64_t seed, const std::filesystem::path& outdir) {
    std::vector<mlfpp::Method> methods = parse_methods(methods_csv);
    std::vector<mlfpp::SimSetting> settings;
    if (paper_grid) {
        settings = mlfpp::paper_grid(replicates, seed);
    } else {
        if (betas.empty() || sigmas.empty() || ns.empty())
            throw std::invalid_argument(
                "either --paper-grid or --betas/--sigmas/--ns are required");
        std::uint64_t index = 0;
        for (double b : betas)
            for (double s : sigmas)
                for (int n : ns)
                    settings.push_back(
                        {b, s, n, replicates, mlfpp::derive_seed(seed, index++)});
    }

    std::vector<mlfpp::SimResult> results;
    results.reserve(settings.size());
    for (const mlfpp::SimSetting& st : settings)
        results.push_back(mlfpp::run_setting(st, methods));

    std::ofstream csv = open_output(outdir, "settings.csv");
    mlfpp::write_settings_csv(csv, settings, results);
    std::ofstream js = open_output(outdir, "summary.json");
    mlfpp::write_settings_json(js, settings, results);
    std::cout << "wrote " << (outdir / "settings.csv").string() << " and "
              << (outdir / "summary.json").string() << " (" << settings.size()
              << " settings)\n";
    return kExitOk;
}

// ------------------------------------------------------------- seasonal ----

mlfpp::ReturnTimeSeries load_return_times(const std::string& input, double level) {
    if (is_observation_csv(input)) {
        std::ifstream in = open_input(input);
        mlfpp::ObservationSeries obs = mlfpp::read_observation_csv(in);
        return mlfpp::to_return_times(mlfpp::extract_exceedances(obs, level));
    }
    std::ifstream in = open_input(input);
    ReturnTimeInput data = read_return_time_csv(in);
    if (data.start_days.empty())
        throw std::invalid_argument("input needs a 'start_day' column");
    return mlfpp::ReturnTimeSeries::make(data.return_times, data.start_days);
}

int cmd_seasonal(const std::string& input, double level, double bandwidth,
                 const std::string& method_name, double horizon, double alpha,
                 const std::vector<double>& quantiles,
                 const std::filesystem::path& outdir) {
    mlfpp::ReturnTimeSeries series = load_return_times(input, level);
    mlfpp::Method m = mlfpp::method_from_string(method_name);
    std::optional<mlfpp::QuantileSet> qs = parse_quantiles(quantiles);

    mlfpp::SeasonalFit fit =
        mlfpp::fit_seasonal(series, bandwidth, m, qs ? &*qs : nullptr);

    std::ofstream out = open_output(outdir, "seasonal.csv");
    out << "day,beta,sigma,q75_hours,p_within_72h,h_below_72,effective_n\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 1; j <= 365; ++j) {
        const mlfpp::DayFit& d = fit.daily[j - 1];
        double q = nan, p = nan, h = nan;
        if (d.params) {
            q = mlfpp::return_time_quantile(*d.params, alpha);
            p = mlfpp::prob_within(*d.params, horizon);
        }
        try {
            h = mlfpp::weighted_freq_below(series, j, bandwidth, horizon);
        } catch (const mlfpp::EmptyWindowError&) {
        }
        out << j << ',' << fmt17(d.params ? d.params->beta : nan) << ','
            << fmt17(d.params ? d.params->sigma : nan) << ',' << fmt17(q) << ','
            << fmt17(p) << ',' << fmt17(h) << ',' << fmt17(d.effective_n) << '\n';
    }
    std::size_t failed = fit.failed_days();
    std::cout << "wrote " << (outdir / "seasonal.csv").string() << " ("
              << (365 - failed) << "/365 days fitted)\n";
    return failed > 182 ? kExitNoConverge : kExitOk;
}

// ------------------------------------------------------------- permtest ----

int cmd_permtest(const std::string& input, double level, int split_year, int B,
                 double bandwidth, const std::string& method_name,
                 std::uint64_t seed, const std::vector<double>& quantiles,
                 const std::filesystem::path& outdir) {
    std::map<int, mlfpp::ReturnTimeSeries> by_year;
    if (is_observation_csv(input)) {
        std::ifstream in = open_input(input);
        mlfpp::ObservationSeries obs = mlfpp::read_observation_csv(in);
        by_year = mlfpp::to_return_times_by_year(mlfpp::extract_exceedances(obs, level));
    } else {
        std::ifstream in = open_input(input);
        ReturnTimeInput data = read_return_time_csv(in);
        if (data.start_days.empty() || data.years.empty())
            throw std::invalid_argument("input needs 'start_day' and 'year' columns");
        std::map<int, std::pair<std::vector<double>, std::vector<int>>> grouped;
        for (std::size_t i = 0; i < data.return_times.size(); ++i) {
            grouped[data.years[i]].first.push_back(data.return_times[i]);
            grouped[data.years[i]].second.push_back(data.start_days[i]);
        }
        for (auto& [y, g] : grouped)
            by_year.emplace(y, mlfpp::ReturnTimeSeries::make(std::move(g.first),
                                                             std::move(g.second)));
    }

    std::size_t first_half = 0;  // default: half-count chronological split
    if (split_year > 0) {
        for (const auto& [y, s] : by_year)
            if (y < split_year) ++first_half;
        if (first_half == 0)
            throw std::invalid_argument("no years before the requested split year");
    }

    mlfpp::Method m = mlfpp::method_from_string(method_name);
    std::optional<mlfpp::QuantileSet> qs = parse_quantiles(quantiles);
    mlfpp::PermutationTestResult res =
        mlfpp::permutation_test(by_year, bandwidth, m, B, seed,
                                qs ? &*qs : nullptr, {}, first_half);

    json j;
    j["observed_distance_beta"] = res.observed_distance_beta;
    j["observed_distance_sigma"] = res.observed_distance_sigma;
    j["p_value_beta"] = res.p_value_beta;
    j["p_value_sigma"] = res.p_value_sigma;
    j["reject_beta_at_5pct"] = res.reject_beta_at_5pct;
    j["reject_sigma_at_5pct"] = res.reject_sigma_at_5pct;
    j["B"] = B;
    j["permutation_distances_beta"] = res.permutation_distances_beta;
    j["permutation_distances_sigma"] = res.permutation_distances_sigma;
    std::ofstream out = open_output(outdir, "permtest.json");
    out << j.dump(2) << '\n';
    std::cout << "p_value_beta " << fmt17(res.p_value_beta) << " p_value_sigma "
              << fmt17(res.p_value_sigma) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------- sensitivity ----

int cmd_sensitivity(const std::string& methods_csv, int n, double beta,
                    double sigma, int grid_size, std::uint64_t seed,
                    const std::vector<double>& quantiles,
                    const std::filesystem::path& outdir) {
    if (n < 2 || grid_size < 1)
        throw std::invalid_argument("need n >= 2 and grid-size >= 1");
    std::vector<mlfpp::Method> methods = parse_methods(methods_csv);
    std::optional<mlfpp::QuantileSet> qs = parse_quantiles(quantiles);

    mlfpp::MlfParams p(beta, sigma);
    std::vector<double> base = mlfpp::sample(p, static_cast<std::size_t>(n), seed);
    double lo = mlfpp::quantile(p, 0.001), hi = mlfpp::quantile(p, 0.999);
    std::vector<double> grid;
    for (int i = 0; i < grid_size; ++i) {
        double f = grid_size == 1 ? 0.0 : static_cast<double>(i) / (grid_size - 1);
        grid.push_back(lo * std::pow(hi / lo, f));  // log-spaced
    }

    std::ofstream out = open_output(outdir, "sensitivity.csv");
    out << "method,x,sc_beta,sc_sigma,valid\n";
    for (mlfpp::Method m : methods) {
        mlfpp::SensitivityCurve c =
            mlfpp::sensitivity_curve(m, base, grid, qs ? &*qs : nullptr);
        for (std::size_t i = 0; i < c.x.size(); ++i)
            out << mlfpp::method_name(m) << ',' << fmt17(c.x[i]) << ','
                << fmt17(c.sc_beta[i]) << ',' << fmt17(c.sc_sigma[i]) << ','
                << (c.valid[i] ? 1 : 0) << '\n';
    }
    std::cout << "wrote " << (outdir / "sensitivity.csv").string() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mittag-Leffler return-time modelling toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key/value (TOML-style) file mirroring the flags");

    int threads = 1;
    app.add_option("--threads", threads,
                   "Worker cap (env MLFPP_THREADS); results are identical for any value")
        ->envname("MLFPP_THREADS");

    std::string output_dir = ".";
    app.add_option("--output-dir", output_dir, "Directory for output files")
        ->capture_default_str();

    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Master seed (artifact default)")
        ->capture_default_str();

    // fit
    auto* fit = app.add_subcommand("fit", "Fit one sample of return times");
    std::string fit_input, fit_method = "qb", fit_format = "text";
    std::vector<double> fit_quantiles;
    fit->add_option("input", fit_input, "Return-time CSV")->required();
    fit->add_option("--method", fit_method, "lm | ml | cm | qls | qb")
        ->capture_default_str();
    fit->add_option("--quantiles", fit_quantiles,
                    "Probabilities for qb/qls (default qb: 0.1,0.3,0.5,0.8,0.925)")
        ->delimiter(',');
    fit->add_option("--format", fit_format, "text | json")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo estimator comparison");
    bool sweep_paper = false;
    std::vector<double> sweep_betas, sweep_sigmas;
    std::vector<int> sweep_ns;
    int sweep_reps = 1000;
    std::string sweep_methods = "lm,ml,cm,qls,qb";
    sweep->add_flag("--paper-grid", sweep_paper,
                    "Full 9 x 9 x 4 = 324-setting reference grid");
    sweep->add_option("--betas", sweep_betas, "Tail parameters")->delimiter(',');
    sweep->add_option("--sigmas", sweep_sigmas, "Scale parameters")->delimiter(',');
    sweep->add_option("--ns", sweep_ns, "Sample sizes")->delimiter(',');
    sweep->add_option("--replicates", sweep_reps, "Replicates per setting")
        ->capture_default_str();
    sweep->add_option("--methods", sweep_methods, "Comma-separated estimators")
        ->capture_default_str();

    // seasonal
    auto* seasonal = app.add_subcommand(
        "seasonal", "Day-of-year parameter curves from observations or return times");
    std::string sea_input, sea_method = "qb";
    double sea_level = 0.99, sea_bandwidth = 46.0, sea_horizon = 72.0, sea_alpha = 0.75;
    std::vector<double> sea_quantiles;
    seasonal->add_option("input", sea_input,
                         "Observation CSV (timestamp,value) or return-time CSV")
        ->required();
    seasonal->add_option("--level", sea_level, "POT quantile level")
        ->capture_default_str();
    seasonal->add_option("--bandwidth", sea_bandwidth, "Kernel bandwidth in days")
        ->capture_default_str();
    seasonal->add_option("--method", sea_method, "Estimator")->capture_default_str();
    seasonal->add_option("--horizon", sea_horizon, "Event horizon in hours")
        ->capture_default_str();
    seasonal->add_option("--alpha", sea_alpha, "Reported return-time quantile")
        ->capture_default_str();
    seasonal->add_option("--quantiles", sea_quantiles, "Probabilities for qb/qls")
        ->delimiter(',');

    // permtest
    auto* permtest = app.add_subcommand(
        "permtest", "Permutation test for seasonal stability between two periods");
    std::string pt_input, pt_method = "qb";
    double pt_level = 0.99, pt_bandwidth = 46.0;
    int pt_B = 1000, pt_split = 0;
    std::vector<double> pt_quantiles;
    permtest->add_option("input", pt_input,
                         "Observation CSV or return-time CSV with a year column")
        ->required();
    permtest->add_option("--level", pt_level, "POT quantile level")
        ->capture_default_str();
    permtest->add_option("--split-year", pt_split,
                         "First year of the second period (0: half-count split)")
        ->capture_default_str();
    permtest->add_option("--B", pt_B, "Number of permutations")->capture_default_str();
    permtest->add_option("--bandwidth", pt_bandwidth, "Kernel bandwidth in days")
        ->capture_default_str();
    permtest->add_option("--method", pt_method, "Estimator")->capture_default_str();
    permtest->add_option("--quantiles", pt_quantiles, "Probabilities for qb/qls")
        ->delimiter(',');

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity",
                                    "Sensitivity curves under one-point contamination");
    std::string sn_methods = "lm,qb,qls,cm";
    int sn_n = 200, sn_grid = 41;
    double sn_beta = 0.9, sn_sigma = 1.0;
    std::vector<double> sn_quantiles;
    sens->add_option("--methods", sn_methods, "Comma-separated estimators")
        ->capture_default_str();
    sens->add_option("--n", sn_n, "Base sample size")->capture_default_str();
    sens->add_option("--beta", sn_beta, "True tail parameter")->capture_default_str();
    sens->add_option("--sigma", sn_sigma, "True scale parameter")->capture_default_str();
    sens->add_option("--grid-size", sn_grid,
                     "Contamination points between the 0.001 and 0.999 quantiles")
        ->capture_default_str();
    sens->add_option("--quantiles", sn_quantiles, "Probabilities for qb/qls")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    (void)threads;  // reserved; all computations are deterministic regardless

    try {
        std::filesystem::path outdir(output_dir);
        if (fit->parsed())
            return cmd_fit(fit_input, fit_method, fit_quantiles, fit_format);
        if (sweep->parsed())
            return cmd_sweep(sweep_paper, sweep_betas, sweep_sigmas, sweep_ns,
                             sweep_reps, sweep_methods, seed, outdir);
        if (seasonal->parsed())
            return cmd_seasonal(sea_input, sea_level, sea_bandwidth, sea_method,
                                sea_horizon, sea_alpha, sea_quantiles, outdir);
        if (permtest->parsed())
            return cmd_permtest(pt_input, pt_level, pt_split, pt_B, pt_bandwidth,
                                pt_method, seed, pt_quantiles, outdir);
        if (sens->parsed())
            return cmd_sensitivity(sn_methods, sn_n, sn_beta, sn_sigma, sn_grid,
                                   seed, sn_quantiles, outdir);
    } catch (const mlfpp::EvaluationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConverge;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
