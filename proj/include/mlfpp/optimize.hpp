#pragma once

#include <algorithm>
#include <cmath>

#include "mlfpp/distribution.hpp"

namespace mlfpp {

// Bound-constrained search contract shared by the iterative estimators.
struct OptimizerConfig {
    double beta_lo = 1e-4;
    double beta_hi = 1.0;
    double sigma_lower = 1e-12;
    double grad_tol = 1e-8;
    double step_tol = 1e-10;
    // Stop once the objective improves by less than this (relative to
    // |f| + 1) on two consecutive iterations; finite-difference gradients
    // cannot make reliable progress below that level.
    double f_rel_tol = 1e-11;
    int max_iter = 500;

    void validate() const {
        if (!(beta_lo > 0.0) || !(beta_hi <= 1.0) || !(beta_lo < beta_hi))
            throw std::invalid_argument("OptimizerConfig: bad beta bounds");
        if (!(sigma_lower > 0.0) || !(grad_tol > 0.0) || !(step_tol > 0.0) ||
            !(f_rel_tol > 0.0) || max_iter < 1)
            throw std::invalid_argument("OptimizerConfig: bad tolerances");
    }
};

struct MinimizeDiagnostics {
    bool converged = false;
    int iterations = 0;
    double objective = 0.0;
};

// Projected quasi-Newton (BFGS) minimization over the box
// (beta_lo, beta_hi] x [sigma_lower, inf). sigma is searched in log scale,
// which keeps the positivity constraint away from the line search and makes
// the iterates scale-equivariant. Gradients are central finite differences.
template <typename F>
std::pair<MlfParams, MinimizeDiagnostics> minimize_bounded(
    F&& objective, const MlfParams& start, const OptimizerConfig& cfg = {}) {
    cfg.validate();

    const double lo0 = cfg.beta_lo, hi0 = cfg.beta_hi;
    const double ls_lo = std::log(cfg.sigma_lower);

    auto clamp0 = [&](double b) { return std::min(std::max(b, lo0), hi0); };
    double u0 = clamp0(start.beta);
    double u1 = std::max(std::log(start.sigma), ls_lo);

    auto eval = [&](double b, double ls) { return objective(b, std::exp(ls)); };

    const double hb = 1e-7, hs = 1e-7;
    auto gradient = [&](double b, double ls, double f0, double* g) {
        double bp = std::min(b + hb, hi0), bm = std::max(b - hb, lo0);
        g[0] = (eval(bp, ls) - eval(bm, ls)) / (bp - bm);
        double sp = ls + hs, sm = std::max(ls - hs, ls_lo);
        g[1] = (eval(b, sp) - eval(b, sm)) / (sp - sm);
        (void)f0;
    };

    double f = eval(u0, u1);
    double g[2];
    gradient(u0, u1, f, g);

    // Inverse Hessian approximation.
    double H00 = 1.0, H01 = 0.0, H11 = 1.0;

    MinimizeDiagnostics diag;
    diag.objective = f;
    int it = 0;
    int stalled = 0;
    for (; it < cfg.max_iter; ++it) {
        // Projected-gradient stationarity check.
        double pg0 = clamp0(u0 - g[0]) - u0;
        double pg1 = std::max(u1 - g[1], ls_lo) - u1;
        if (std::hypot(pg0, pg1) <= cfg.grad_tol) {
            diag.converged = true;
            break;
        }

        double d0 = -(H00 * g[0] + H01 * g[1]);
        double d1 = -(H01 * g[0] + H11 * g[1]);
        if (d0 * g[0] + d1 * g[1] >= 0.0) {  // not a descent direction; reset
            H00 = H11 = 1.0;
            H01 = 0.0;
            d0 = -g[0];
            d1 = -g[1];
        }

        double a = 1.0;
        double n0 = u0, n1 = u1, fn = f;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            n0 = clamp0(u0 + a * d0);
            n1 = std::max(u1 + a * d1, ls_lo);
            fn = eval(n0, n1);
            double pred = (n0 - u0) * g[0] + (n1 - u1) * g[1];
            if (std::isfinite(fn) && fn <= f + 1e-4 * pred) {
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        double s0 = n0 - u0, s1 = n1 - u1;
        double step = std::hypot(s0, s1);
        if (!accepted || step <= cfg.step_tol) {
            // A failed backtracking search means no direction of numerically
            // meaningful descent remains (objective noise dominates), which is
            // stationarity at finite-difference resolution.
            diag.converged = true;
            if (accepted) {
                u0 = n0; u1 = n1; f = fn;
            }
            break;
        }

        if (f - fn <= cfg.f_rel_tol * (std::abs(f) + 1.0)) {
            if (++stalled >= 2) {
                u0 = n0; u1 = n1; f = fn;
                diag.converged = true;
                break;
            }
        } else {
            stalled = 0;
        }

        double gn[2];
        gradient(n0, n1, fn, gn);
        double y0 = gn[0] - g[0], y1 = gn[1] - g[1];
        double sy = s0 * y0 + s1 * y1;
        if (sy > 1e-12 * step * std::hypot(y0, y1)) {
            // BFGS update of the inverse Hessian.
            double Hy0 = H00 * y0 + H01 * y1;
            double Hy1 = H01 * y0 + H11 * y1;
            double yHy = y0 * Hy0 + y1 * Hy1;
            double c1 = (sy + yHy) / (sy * sy);
            double c2 = 1.0 / sy;
            H00 += c1 * s0 * s0 - c2 * (Hy0 * s0 + s0 * Hy0);
            H01 += c1 * s0 * s1 - c2 * (Hy0 * s1 + s0 * Hy1);
            H11 += c1 * s1 * s1 - c2 * (Hy1 * s1 + s1 * Hy1);
        }
        u0 = n0; u1 = n1; f = fn;
        g[0] = gn[0]; g[1] = gn[1];
    }
    diag.iterations = it;
    diag.objective = f;
    return {MlfParams(u0, std::exp(u1)), diag};
}

}  // namespace mlfpp
