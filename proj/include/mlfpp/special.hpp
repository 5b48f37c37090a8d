#pragma once

#include <stdexcept>

namespace mlfpp {

// Evaluation policy for the Mittag-Leffler functions. The power series is
// always used for |x| <= series_cutoff; outside of it the evaluator picks
// between optimally truncated asymptotics, an extended-precision series and
// a spectral-integral fallback.
struct MlfEvalConfig {
    double series_cutoff = 1.0;
    double target_rel_tol = 1e-10;
    int max_terms = 400;

    void validate() const {
        if (!(series_cutoff > 0.0))
            throw std::invalid_argument("series_cutoff must be > 0");
        if (!(target_rel_tol > 0.0) || target_rel_tol > 1e-4)
            throw std::invalid_argument("target_rel_tol must be in (0, 1e-4]");
        if (max_terms < 50)
            throw std::invalid_argument("max_terms must be >= 50");
    }
};

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// One-parameter Mittag-Leffler function E_beta(x) = sum_k x^k / Gamma(1+beta*k)
// for beta in (0,1] and real x. Supported domain: any x <= 0 plus positive x
// where the series converges without cancellation (small positive x).
double mittag_leffler(double beta, double x, const MlfEvalConfig& cfg = {});

// Two-parameter Mittag-Leffler function sum_k x^k / Gamma(rho + beta*k).
// rho = beta (density use) and rho = 1 are fully supported for x <= 0.
double mittag_leffler_two_param(double beta, double rho, double x,
                                const MlfEvalConfig& cfg = {});

// log(E_{beta,beta}(-t)) for t >= 0, computed without underflow for large t.
double log_mittag_leffler_bb(double beta, double t, const MlfEvalConfig& cfg = {});

// Digamma function for x > 0, relative error <= 1e-12.
double digamma(double x);

}  // namespace mlfpp
