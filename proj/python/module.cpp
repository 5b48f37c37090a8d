#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlfpp/distribution.hpp"
#include "mlfpp/estimators.hpp"
#include "mlfpp/seasonal.hpp"
#include "mlfpp/special.hpp"

namespace py = pybind11;

namespace {

mlfpp::EstimateResult run_estimate(const std::string& method,
                                   const std::vector<double>& values,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& quantiles) {
    mlfpp::WeightedSample ws = mlfpp::WeightedSample::make(values, weights);
    mlfpp::Method m = mlfpp::method_from_string(method);
    if (quantiles.empty()) return mlfpp::estimate(m, ws);
    mlfpp::QuantileSet qs(quantiles);
    return mlfpp::estimate(m, ws, &qs);
}

py::dict result_dict(const mlfpp::EstimateResult& r) {
    py::dict d;
    d["method"] = mlfpp::method_name(r.method);
    d["beta"] = r.params.beta;
    d["sigma"] = r.params.sigma;
    d["converged"] = r.converged;
    d["objective"] = r.objective_value;
    d["iterations"] = r.iterations;
    d["admissibility_warning"] = r.admissibility_warning;
    return d;
}

}  // namespace

PYBIND11_MODULE(_mlfpp, m) {
    m.doc() = "Mittag-Leffler return-time modelling (native core)";

    m.def(
        "mittag_leffler",
        [](double beta, double x, double rho) {
            return mlfpp::mittag_leffler_two_param(beta, rho, x);
        },
        py::arg("beta"), py::arg("x"), py::arg("rho") = 1.0,
        "Two-parameter Mittag-Leffler function E_{beta,rho}(x)");

    m.def(
        "cdf",
        [](double beta, double sigma, double x) {
            return mlfpp::cdf(mlfpp::MlfParams(beta, sigma), x);
        },
        py::arg("beta"), py::arg("sigma"), py::arg("x"));
    m.def(
        "pdf",
        [](double beta, double sigma, double x) {
            return mlfpp::pdf(mlfpp::MlfParams(beta, sigma), x);
        },
        py::arg("beta"), py::arg("sigma"), py::arg("x"));
    m.def(
        "log_pdf",
        [](double beta, double sigma, double x) {
            return mlfpp::log_pdf(mlfpp::MlfParams(beta, sigma), x);
        },
        py::arg("beta"), py::arg("sigma"), py::arg("x"));
    m.def(
        "quantile",
        [](double beta, double sigma, double alpha) {
            return mlfpp::quantile(mlfpp::MlfParams(beta, sigma), alpha);
        },
        py::arg("beta"), py::arg("sigma"), py::arg("alpha"));
    m.def(
        "sample",
        [](double beta, double sigma, std::size_t n, std::uint64_t seed) {
            return mlfpp::sample(mlfpp::MlfParams(beta, sigma), n, seed);
        },
        py::arg("beta"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 1,
        "n i.i.d. variates, deterministic for a fixed seed");

    m.def(
        "estimate",
        [](const std::string& method, const std::vector<double>& values,
           const std::vector<double>& weights, const std::vector<double>& quantiles) {
            return result_dict(run_estimate(method, values, weights, quantiles));
        },
        py::arg("method"), py::arg("values"),
        py::arg("weights") = std::vector<double>{},
        py::arg("quantiles") = std::vector<double>{},
        "Fit one sample; method is one of lm, ml, cm, qls, qb");

    m.def(
        "fit_seasonal",
        [](const std::vector<double>& return_times, const std::vector<int>& start_days,
           double bandwidth, const std::string& method) {
            mlfpp::ReturnTimeSeries s =
                mlfpp::ReturnTimeSeries::make(return_times, start_days);
            mlfpp::SeasonalFit fit = mlfpp::fit_seasonal(
                s, bandwidth, mlfpp::method_from_string(method));
            py::list days;
            for (int j = 1; j <= 365; ++j) {
                const mlfpp::DayFit& d = fit.daily[j - 1];
                py::dict e;
                e["day"] = j;
                e["beta"] = d.params ? py::cast(d.params->beta) : py::none();
                e["sigma"] = d.params ? py::cast(d.params->sigma) : py::none();
                e["converged"] = d.converged;
                e["effective_n"] = d.effective_n;
                days.append(e);
            }
            return days;
        },
        py::arg("return_times"), py::arg("start_days"), py::arg("bandwidth") = 46.0,
        py::arg("method") = "qb",
        "Day-of-year parameter curve via Epanechnikov-weighted fits");
}
