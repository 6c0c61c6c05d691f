#include "ibnr/expo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ibnr/errors.hpp"
#include "ibnr/quadrature.hpp"
#include "ibnr/specfun.hpp"

namespace ibnr {

namespace {

const ExponentialDelay& require_exponential(const ModelConfig& cfg) {
    cfg.validate();
    const ExponentialDelay* e = cfg.delay.as_exponential();
    if (!e) throw DomainError("this evaluator requires an exponential delay");
    return *e;
}

void require_fractional(const ModelConfig& cfg) {
    if (!(cfg.renewal.alpha < 1.0)) throw DomainError("asymptotic laws require 0 < alpha < 1");
}

// e^{-βt} 1F1(α, 1+α, βt).
double k1(double alpha, double beta, double t) { return kummer_scaled(alpha, 1.0 + alpha, beta * t); }

constexpr int an_cap = 2000;

// Truncation rule: 50 consecutive terms below 1e-14 of the partial sum and a
// geometric tail bound (ratio from the last 10 terms, < 0.9) under 1e-10.
template <class Term>
SeriesReport sum_certified(Term term, int forced, const char* what) {
    SeriesReport r;
    std::vector<double> recent;
    int small = 0;
    const int cap = forced > 0 ? forced : an_cap;
    for (int n = 0; n < cap; ++n) {
        const double v = term(n);
        r.value += v;
        r.terms = n + 1;
        if (forced > 0) continue;
        recent.push_back(std::abs(v));
        if (recent.size() > 11) recent.erase(recent.begin());
        small = std::abs(v) < 1e-14 * std::abs(r.value) ? small + 1 : 0;
        if (small >= 50 && recent.size() == 11) {
            double rho = 0.0;
            for (std::size_t k = 0; k + 1 < recent.size(); ++k)
                rho = std::max(rho, recent[k] > 0 ? recent[k + 1] / recent[k] : 0.0);
            if (rho < 0.9) {
                r.tail = std::abs(v) * rho / (1.0 - rho);
                if (r.tail <= 1e-10 * std::abs(r.value)) return r;
            }
        }
    }
    if (forced > 0) return r;
    std::ostringstream os;
    os << what << ": series not certified after " << an_cap << " terms (partial sum " << r.value
       << ", last term " << (recent.empty() ? 0.0 : recent.back()) << ")";
    throw NumericalError(os.str());
}

}  // namespace

double expo_mean_exact(const ModelConfig& cfg, double t) {
    const ExponentialDelay& e = require_exponential(cfg);
    if (!(t > 0)) throw DomainError("expo_mean_exact requires t > 0");
    const double a = cfg.renewal.alpha, b = e.beta, d = cfg.delta;
    const double undiscounted = cfg.mu(1) * k1(a, b, t) * renewal_function(cfg.renewal, t);
    // Discounting enters only through e^{-δt} E[e^{-δL}].
    return std::exp(-d * t) * (b / (b + d)) * undiscounted;
}

DecayLaw expo_mean_asym(const ModelConfig& cfg) {
    const ExponentialDelay& e = require_exponential(cfg);
    require_fractional(cfg);
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, b = e.beta, d = cfg.delta;
    return {cfg.mu(1) * lam * (b / (b + d)) / (b * gamma_fn(a)), a - 1.0, 0.0, d};
}

double log_a_n_coeff(double alpha, double beta, int n) {
    if (n < 0) throw DomainError("A_n requires n >= 0");
    if (!(alpha > 0) || !(beta > 0)) throw DomainError("A_n requires alpha, beta > 0");
    return std::log(alpha) + n * std::log(beta) + log_beta(alpha, alpha + n + 1.0) - log_gamma(n + 1.0) -
           std::log(alpha + n);
}

double a_n_coeff(double alpha, double beta, int n) { return std::exp(log_a_n_coeff(alpha, beta, n)); }

SeriesReport expo_an_series(double alpha, double beta, double t, int forced_terms) {
    if (!(t > 0)) throw DomainError("A_n series requires t > 0");
    const double lt = std::log(t), z = 2.0 * beta * t;
    auto term = [&](int n) {
        const double b = 2.0 * alpha + n + 1.0;
        const double lk = log_kummer_1f1(alpha, b, z).log_value;
        return std::exp(log_a_n_coeff(alpha, beta, n) + (2.0 * alpha + n) * lt + lk - z);
    };
    return sum_certified(term, forced_terms, "variance A_n series");
}

double expo_variance_exact(const ModelConfig& cfg, double t) {
    const ExponentialDelay& e = require_exponential(cfg);
    if (!(t > 0)) throw DomainError("expo_variance_exact requires t > 0");
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, b = e.beta, d = cfg.delta;
    const double mu1 = cfg.mu(1), mu2 = cfg.mu(2);
    const double E1 = b / (b + d), E2 = b / (b + 2 * d);
    const double g1 = gamma_fn(1.0 + a);
    const double S = expo_an_series(a, b, t).value;
    const double K = k1(a, b, t);
    const double ta = std::pow(t, a);
    const double disc = std::exp(-2 * d * t);
    const double series_part = 2 * mu1 * mu1 * lam * lam * a * E1 * E1 / (g1 * g1) * S;
    const double mu2_part = mu2 * lam * E2 * ta * K / g1;
    const double mean_sq = mu1 * mu1 * lam * lam * E1 * E1 * ta * ta * K * K / (g1 * g1);
    const double v = disc * (series_part + mu2_part - mean_sq);
    if (v < -1e-9 * disc * (series_part + mu2_part)) throw NumericalError("expo_variance_exact evaluated negative");
    return v;
}

DecayLaw expo_variance_asym(const ModelConfig& cfg) {
    const ExponentialDelay& e = require_exponential(cfg);
    require_fractional(cfg);
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, b = e.beta, d = cfg.delta;
    const double E1 = b / (b + d), E2 = b / (b + 2 * d);
    const double ga = gamma_fn(a);
    const double mu1 = cfg.mu(1), mu2 = cfg.mu(2);
    const double C = mu1 * mu1 * lam * lam * E1 * E1 / (std::pow(b, a + 1.0) * ga) + mu2 * lam * E2 / (b * ga);
    return {C, a - 1.0, 0.0, 2 * d};
}

double log_w_integral(double beta, double s, int n, double t, double alpha) {
    if (!(s > 0) || !(s <= t)) throw DomainError("w_integral requires 0 < s <= t");
    if (n < 0) throw DomainError("w_integral requires n >= 0");
    const double p = alpha + n;
    // φ(y) = 2βsy + p ln(t - sy) is concave; factor out its maximum.
    auto phi = [&](double y) { return 2 * beta * s * y + p * std::log(t - s * y); };
    const double y_star = std::clamp((t - p / (2 * beta)) / s, 0.0, 1.0);
    const double peak = phi(y_star);
    auto f = [&](double v) {
        const double y = std::pow(v, 1.0 / alpha);
        if (t - s * y <= 0) return 0.0;
        return std::exp(phi(y) - peak);
    };
    std::vector<double> ys{0.0, 1.0};
    const double w = (t - s * y_star) / (s * std::sqrt(p)) + 1e-300;
    for (double k : {-30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0}) {
        const double y = y_star + k * w;
        if (y > 0 && y < 1) ys.push_back(y);
    }
    const double inv = 1.0 / (2 * beta * s);
    for (double k : {1.0, 10.0, 100.0})
        if (k * inv < 1) ys.push_back(1.0 - k * inv);
    std::sort(ys.begin(), ys.end());
    std::vector<double> vs;
    for (double y : ys) vs.push_back(std::pow(y, alpha));
    QuadratureControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = 1e-13;
    qc.max_depth = 60;
    const double I = integrate(f, vs, qc);
    return peak + std::log(I / alpha) - log_beta(alpha, alpha + n + 1.0);
}

double w_integral(double beta, double s, int n, double t, double alpha) {
    const double v = std::exp(log_w_integral(beta, s, n, t, alpha));
    if (!std::isfinite(v)) throw RangeError("w_integral overflows; use log_w_integral");
    return v;
}

double expo_w_series(double alpha, double beta, double s, double t) {
    if (!(s > 0) || !(s <= t)) throw DomainError("expected 0 < s <= t");
    if (beta * t <= w_series_direct_limit) {
        const double base = alpha * std::log(s) - beta * (s + t);
        auto term = [&](int n) {
            return std::exp(log_a_n_coeff(alpha, beta, n) + base + log_w_integral(beta, s, n, t, alpha));
        };
        return sum_certified(term, 0, "covariance W series").value;
    }
    // Σ_n A_n s^α W_n e^{-β(s+t)} = ∫_0^s e^{-β(s-x)} x^{α-1} (t-x)^α K1(t-x) dx.
    auto g = [&](double x) {
        return std::exp(-beta * (s - x)) * std::pow(t - x, alpha) * k1(alpha, beta, t - x);
    };
    auto f = [&](double u) { return g(std::pow(u, 1.0 / alpha)); };
    std::vector<double> xs{0.0};
    for (double k = 1e-3; k < beta * s; k *= 10.0) xs.push_back(s - k / beta);
    xs.push_back(s);
    std::sort(xs.begin(), xs.end());
    std::vector<double> us;
    for (double x : xs)
        if (x >= 0) us.push_back(std::pow(x, alpha));
    QuadratureControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = 1e-13;
    qc.max_depth = 60;
    return integrate(f, us, qc) / alpha;
}

double expo_cov_exact(const ModelConfig& cfg, double s, double t) {
    const ExponentialDelay& e = require_exponential(cfg);
    if (!(s > 0) || !(s <= t)) throw DomainError("expo_cov_exact requires 0 < s <= t");
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, b = e.beta, d = cfg.delta;
    const double mu1 = cfg.mu(1), mu2 = cfg.mu(2);
    const double E1 = b / (b + d), E2 = b / (b + 2 * d);
    const double g1 = gamma_fn(1.0 + a);
    const double lead = mu1 * mu1 * lam * lam * a * E1 * E1 / (g1 * g1);
    const double same = std::exp(-b * (t - s)) * expo_an_series(a, b, s).value;
    const double cross = expo_w_series(a, b, s, t);
    const double Ks = k1(a, b, s), Kt = k1(a, b, t);
    const double mu2_part = mu2 * lam * E2 / g1 * std::exp(-b * (t - s)) * std::pow(s, a) * Ks;
    const double product = mu1 * mu1 * lam * lam * E1 * E1 / (g1 * g1) * std::pow(s * t, a) * Ks * Kt;
    return std::exp(-d * (s + t)) * (lead * (same + cross) - product) + std::exp(-2 * d * t) * mu2_part;
}

DecayLaw expo_cov_asym(const ModelConfig& cfg, double s) {
    const ExponentialDelay& e = require_exponential(cfg);
    require_fractional(cfg);
    if (!(s > 0)) throw DomainError("expo_cov_asym requires s > 0");
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, b = e.beta, d = cfg.delta;
    const double E1 = b / (b + d);
    const double ga = gamma_fn(a);
    // e^{-βs} ∫_0^s e^{βx} x dm(x) = (λ/Γ(α)) ∫_0^s e^{-βv} (s-v)^α dv.
    QuadratureControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = 1e-12;
    const double I = lam / ga *
                     integrate([&](double v) { return std::exp(-b * v) * std::pow(s - v, a); },
                               decade_points(0.0, s, 1e-3 / b), qc);
    const double C = cfg.mu(1) * cfg.mu(1) * lam * (1.0 - a) * E1 * E1 / (b * ga) * std::exp(-d * s) * I;
    return {C, a - 2.0, 0.0, d};
}

}  // namespace ibnr
