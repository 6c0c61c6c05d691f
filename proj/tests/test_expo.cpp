#include <doctest.h>

#include <cmath>

#include "ibnr/engine.hpp"
#include "ibnr/errors.hpp"
#include "ibnr/expo.hpp"
#include "ibnr/specfun.hpp"

using namespace ibnr;

namespace {

ModelConfig expo_config(double alpha, double beta, double lambda = 1.5) {
    ModelConfig c;
    c.renewal = {alpha, lambda};
    c.delay = DelayDistribution::exponential(beta);
    c.claim_moments = {1.0, 4.0};
    return c;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("A_n coefficients") {
    CHECK(rel(a_n_coeff(0.6, 1.0, 10), 5.39307923628959484e-9) < 1e-12);
    CHECK(rel(std::exp(log_a_n_coeff(0.6, 1.0, 10)), a_n_coeff(0.6, 1.0, 10)) < 1e-13);
    CHECK_THROWS_AS(a_n_coeff(0.6, 1.0, -1), DomainError);
}

TEST_CASE("certified A_n series") {
    const SeriesReport r = expo_an_series(0.6, 1.0, 5.0);
    CHECK(r.terms >= 50);
    CHECK(r.tail <= 1e-10 * std::abs(r.value));
    const SeriesReport forced = expo_an_series(0.6, 1.0, 5.0, 400);
    CHECK(forced.terms == 400);
    CHECK(rel(forced.value, r.value) < 1e-10);
}

TEST_CASE("W integral") {
    CHECK(rel(w_integral(1.0, 2.0, 3, 5.0, 0.6), 2702.98823013117488) < 1e-9);
    CHECK(rel(log_w_integral(1.0, 2.0, 3, 5.0, 0.6), std::log(2702.98823013117488)) < 1e-11);
    CHECK_THROWS_AS(w_integral(1.0, 6.0, 3, 5.0, 0.6), DomainError);
}

TEST_CASE("W series: term-by-term and resummed routes agree at the switch") {
    const double alpha = 0.6, beta = 1.0, s = 20.0;
    const double t_lo = w_series_direct_limit * (1 - 1e-9), t_hi = w_series_direct_limit * (1 + 1e-9);
    CHECK(rel(expo_w_series(alpha, beta, s, t_lo), expo_w_series(alpha, beta, s, t_hi)) < 1e-6);
}

TEST_CASE("exact mean and variance against quadrature") {
    const ModelConfig cfg = expo_config(0.6, 1.0, 1.0);
    CHECK(rel(expo_mean_exact(cfg, 5.0), mean_ibnr(cfg, 5.0)) < 1e-9);
    CHECK(rel(expo_variance_exact(cfg, 5.0), variance(cfg, 5.0)) < 1e-8);
    CHECK(rel(expo_cov_exact(cfg, 2.0, 5.0), covariance(cfg, 2.0, 5.0)) < 1e-7);
    // at s = t the covariance collapses to the variance
    CHECK(rel(expo_cov_exact(cfg, 5.0, 5.0), expo_variance_exact(cfg, 5.0)) < 1e-10);
}

TEST_CASE("asymptotic laws") {
    const ModelConfig cfg = expo_config(0.6, 0.1);
    const DecayLaw m = expo_mean_asym(cfg);
    CHECK(m.power == doctest::Approx(-0.4));
    CHECK(m.exp_rate == 0.0);
    CHECK(rel(m.constant, 1.5 / (0.1 * gamma_fn(0.6))) < 1e-14);
    CHECK(rel(m(1e5), 0.100726) < 5e-6);
    CHECK(rel(expo_mean_exact(cfg, 1e5), 0.100730) < 5e-6);

    const DecayLaw v = expo_variance_asym(cfg);
    CHECK(v.power == doctest::Approx(-0.4));
    CHECK(rel(v(1e5), 1.004398) < 5e-7);
    CHECK(rel(expo_variance_exact(cfg, 1e5), 0.994294) < 5e-6);

    const DecayLaw c = expo_cov_asym(cfg, 1e4);
    CHECK(c.power == doctest::Approx(-1.4));
    CHECK(rel(c(1e5), 1.02e-3) < 5e-3);
    // the covariance law is the large-t limit of the exact covariance
    const ModelConfig unit = expo_config(0.6, 1.0, 1.0);
    const DecayLaw cu = expo_cov_asym(unit, 2.0);
    CHECK(rel(expo_cov_exact(unit, 2.0, 2000.0), cu(2000.0)) < 2e-2);
}

TEST_CASE("discounted mean decays exponentially") {
    ModelConfig cfg = expo_config(0.6, 1.0);
    cfg.delta = 0.05;
    const DecayLaw m = expo_mean_asym(cfg);
    CHECK(m.exp_rate == doctest::Approx(0.05));
    CHECK(rel(expo_mean_exact(cfg, 400.0), m(400.0)) < 1e-2);
}

TEST_CASE("discounting rescales the exact mean") {
    ModelConfig cfg = expo_config(0.6, 1.3);
    const double base = expo_mean_exact(cfg, 7.0);
    cfg.delta = 0.2;
    CHECK(rel(expo_mean_exact(cfg, 7.0), std::exp(-0.2 * 7.0) * 1.3 / 1.5 * base) < 1e-13);
}

TEST_CASE("exponential evaluators reject other inputs") {
    ModelConfig cfg = expo_config(0.6, 1.0);
    cfg.delay = DelayDistribution::pareto(1.0, 1.4);
    CHECK_THROWS_AS(expo_mean_exact(cfg, 1.0), DomainError);
    CHECK_THROWS_AS(expo_mean_asym(expo_config(1.0, 1.0)), DomainError);
    CHECK_THROWS_AS(expo_variance_exact(expo_config(0.6, 1.0), 0.0), DomainError);
}
