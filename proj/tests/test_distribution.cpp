#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mlfpp/distribution.hpp"
#include "mlfpp/errors.hpp"

using namespace mlfpp;

namespace {
double rel_err(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }
}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(MlfParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MlfParams(1.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MlfParams(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantileSet({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileSet({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(QuantileSet({0.0, 0.4}), std::invalid_argument);
}

TEST_CASE("cdf closed forms and support boundary") {
    CHECK(rel_err(cdf(MlfParams(1.0, 2.0), 2.0), 1.0 - std::exp(-1.0)) <= 1e-12);
    CHECK(cdf(MlfParams(0.9, 5.0), 0.0) == 0.0);
    CHECK(cdf(MlfParams(0.9, 5.0), -3.0) == 0.0);
    // 1 - e*erfc(1) via the half-case closed form.
    CHECK(rel_err(cdf(MlfParams(0.5, 1.0), 1.0),
                  1.0 - std::exp(1.0) * std::erfc(1.0)) <= 1e-10);
    CHECK_THROWS_AS(cdf(MlfParams(0.5, 1.0), std::nan("")), std::domain_error);
}

TEST_CASE("cdf is increasing and tends to 1") {
    MlfParams p(0.7, 3.0);
    double prev = 0.0;
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0, 1e4, 1e8}) {
        double F = cdf(p, x);
        CHECK(F > prev);
        prev = F;
    }
    CHECK(prev > 0.999);
}

TEST_CASE("pdf closed form and consistency with the cdf") {
    CHECK(rel_err(pdf(MlfParams(1.0, 2.0), 2.0), 0.5 * std::exp(-1.0)) <= 1e-12);
    MlfParams p(0.8, 1.0);
    for (double x : {0.5, 1.0, 5.0}) {
        double h = 1e-6 * x;
        double fd = (cdf(p, x + h) - cdf(p, x - h)) / (2.0 * h);
        CHECK(rel_err(pdf(p, x), fd) <= 1e-6);
    }
    CHECK_THROWS_AS(pdf(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(log_pdf(p, -1.0), std::domain_error);
}

TEST_CASE("log_pdf does not underflow deep in the tail") {
    double lp = log_pdf(MlfParams(0.7, 1.0), 1e150);
    CHECK(std::isfinite(lp));
    CHECK(lp < -100.0);
}

TEST_CASE("quantile closed forms, identity, monotonicity") {
    CHECK(rel_err(quantile(MlfParams(1.0, 1.0), 0.5), std::log(2.0)) <= 1e-12);
    CHECK(rel_err(quantile(MlfParams(1.0, 100.0), 0.75), 100.0 * std::log(4.0)) <= 1e-12);
    MlfParams p(0.7, 1.0);
    double prev = 0.0;
    for (int i = 1; i <= 19; ++i) {
        double a = 0.05 * i;
        double q = quantile(p, a);
        CHECK(q > prev);
        prev = q;
        CHECK(std::abs(cdf(p, q) - a) <= 1e-10);
    }
    CHECK_THROWS_AS(quantile(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile(p, 1.0), std::domain_error);
}

TEST_CASE("scale equivariance of the quantile function") {
    for (double c : {0.01, 3.0, 2500.0}) {
        double q1 = quantile(MlfParams(0.8, 1.0), 0.7);
        double qc = quantile(MlfParams(0.8, c), 0.7);
        CHECK(rel_err(qc, c * q1) <= 1e-9);
    }
}

TEST_CASE("sampling: determinism, positivity, exponential moments") {
    auto a = sample(MlfParams(0.8, 1.0), 5, 12345);
    auto b = sample(MlfParams(0.8, 1.0), 5, 12345);
    CHECK(a == b);
    auto c = sample(MlfParams(0.8, 1.0), 5, 12346);
    CHECK(a != c);
    for (double v : a) CHECK(v > 0.0);

    auto e = sample(MlfParams(1.0, 5.0), 100000, 7);
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= e.size();
    // exponential: sd of the mean = 5/sqrt(n)
    CHECK(std::abs(mean - 5.0) <= 3.0 * 5.0 / std::sqrt((double)e.size()));
}

TEST_CASE("sampling: KS statistic against the implemented cdf") {
    MlfParams p(0.8, 1.0);
    auto x = sample(p, 20000, 99);
    std::sort(x.begin(), x.end());
    double n = (double)x.size();
    double D = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double F = cdf(p, x[i]);
        D = std::max(D, std::abs(F - (i + 1) / n));
        D = std::max(D, std::abs(F - i / n));
    }
    // 1%-level Kolmogorov critical value.
    CHECK(D < 1.6276 / std::sqrt(n));
}

TEST_CASE("dF_dsigma: closed form, sign, finite differences") {
    CHECK(rel_err(dF_dsigma(MlfParams(1.0, 1.0), 1.0), -std::exp(-1.0)) <= 1e-10);
    for (double beta : {0.6, 0.8, 0.95}) {
        MlfParams p(beta, 2.0);
        for (double x : {0.5, 1.0, 10.0}) {
            double d = dF_dsigma(p, x);
            CHECK(d < 0.0);
            double h = 1e-6 * p.sigma;
            double fd = (cdf(MlfParams(beta, p.sigma + h), x) -
                         cdf(MlfParams(beta, p.sigma - h), x)) /
                        (2.0 * h);
            CHECK(rel_err(d, fd) <= 1e-5);
        }
    }
}

TEST_CASE("dF_dbeta: finite differences and the sign thresholds") {
    for (double beta : {0.6, 0.75, 0.9}) {
        MlfParams p(beta, 1.0);
        for (double a : {0.05, 0.3, 0.8}) {
            double x = quantile(p, a);
            double d = dF_dbeta(p, x).value;
            double h = 1e-6;
            double fd = (cdf(MlfParams(beta + h, 1.0), x) -
                         cdf(MlfParams(beta - h, 1.0), x)) /
                        (2.0 * h);
            if (std::abs(fd) > 1e-8) CHECK(rel_err(d, fd) <= 1e-4);
        }
        // Sign pattern: negative below alpha = 0.1797, positive above 0.5935.
        CHECK(dF_dbeta(p, quantile(p, 0.05)).value < 0.0);
        CHECK(dF_dbeta(p, quantile(p, 0.15)).value < 0.0);
        CHECK(dF_dbeta(p, quantile(p, 0.65)).value > 0.0);
        CHECK(dF_dbeta(p, quantile(p, 0.8)).value > 0.0);
    }
}

TEST_CASE("dF_dbeta series region agrees with the flagged fallback") {
    MlfParams p(0.7, 3.0);
    auto r = dF_dbeta(p, 2.0);  // (2/3)^0.7 < 1: series regime
    CHECK_FALSE(r.finite_difference);
    auto far = dF_dbeta(p, 300.0);
    CHECK(far.finite_difference);
}

TEST_CASE("heavy tail matches the asymptotic survival law") {
    for (double beta : {0.6, 0.8}) {
        MlfParams p(beta, 2.0);
        double x = quantile(p, 0.9999) * 100.0;
        double surv = 1.0 - cdf(p, x);
        double law = std::pow(x / p.sigma, -beta) / std::tgamma(1.0 - beta);
        CHECK(rel_err(surv, law) < 0.05);
    }
}

TEST_CASE("quantile-set admissibility verdicts") {
    CHECK(check_quantile_admissibility(QuantileSet::qb_default()) == Admissibility::Conjectured);
    CHECK(check_quantile_admissibility(QuantileSet({0.3, 0.7})) == Admissibility::NotEstablished);
    CHECK(check_quantile_admissibility(QuantileSet({0.02, 0.7})) == Admissibility::Guaranteed);
    CHECK(check_quantile_admissibility(QuantileSet({0.1, 0.5})) == Admissibility::NotEstablished);
}
