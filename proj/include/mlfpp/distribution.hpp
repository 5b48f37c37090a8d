#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlfpp/special.hpp"

namespace mlfpp {

// Tail/scale parameter pair of the Mittag-Leffler law.
struct MlfParams {
    double beta;
    double sigma;

    MlfParams(double beta_, double sigma_) : beta(beta_), sigma(sigma_) {
        if (!(beta > 0.0) || beta > 1.0)
            throw std::invalid_argument("MlfParams: beta must be in (0,1]");
        if (!(sigma > 0.0))
            throw std::invalid_argument("MlfParams: sigma must be > 0");
    }
};

// Ordered probabilities alpha_1 < ... < alpha_r used by quantile estimation.
struct QuantileSet {
    std::vector<double> alphas;

    explicit QuantileSet(std::vector<double> a) : alphas(std::move(a)) {
        if (alphas.size() < 2)
            throw std::invalid_argument("QuantileSet: need at least 2 quantiles");
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            if (!(alphas[i] > 0.0 && alphas[i] < 1.0))
                throw std::invalid_argument("QuantileSet: entries must be in (0,1)");
            if (i > 0 && !(alphas[i] > alphas[i - 1]))
                throw std::invalid_argument("QuantileSet: entries must be strictly increasing");
        }
    }

    // Recommended set for the quantile-based estimator.
    static QuantileSet qb_default() { return QuantileSet({0.1, 0.3, 0.5, 0.8, 0.925}); }
    // Equidistant set for quantile least squares.
    static QuantileSet qls_default() { return QuantileSet({0.1, 0.3, 0.5, 0.7, 0.9}); }
};

enum class Admissibility { Guaranteed, Conjectured, NotEstablished };

double cdf(const MlfParams& p, double x, const MlfEvalConfig& cfg = {});
double pdf(const MlfParams& p, double x, const MlfEvalConfig& cfg = {});
double log_pdf(const MlfParams& p, double x, const MlfEvalConfig& cfg = {});
double quantile(const MlfParams& p, double alpha, const MlfEvalConfig& cfg = {});

// n i.i.d. variates, deterministic for a fixed seed (xoshiro256++ stream,
// Kozubowski-Rachev inversion).
std::vector<double> sample(const MlfParams& p, std::size_t n, std::uint64_t seed);

// dF/dsigma = -(x/sigma) * f(x); strictly negative on the support.
double dF_dsigma(const MlfParams& p, double x, const MlfEvalConfig& cfg = {});

struct BetaDerivative {
    double value;
    bool finite_difference;  // true when the series regime was unavailable
};

// dF/dbeta, by its power series where that regime is active and by a flagged
// central finite difference elsewhere.
BetaDerivative dF_dbeta(const MlfParams& p, double x, const MlfEvalConfig& cfg = {});

// Thresholds from the consistency analysis: "conjectured" needs one quantile
// below 0.1797 and one above 0.5935; "guaranteed" tightens the lower one to
// 0.0297.
Admissibility check_quantile_admissibility(const QuantileSet& qs);

}  // namespace mlfpp
