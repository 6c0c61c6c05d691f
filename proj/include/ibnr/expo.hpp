#pragma once

// Closed forms and asymptotic laws for exponentially distributed delays.

#include "ibnr/decay_law.hpp"
#include "ibnr/model.hpp"

namespace ibnr {

struct SeriesReport {
    double value = 0.0;   // partial sum
    int terms = 0;        // terms summed
    double tail = 0.0;    // certified bound on the neglected tail (0 when forced)
};

double expo_mean_exact(const ModelConfig& cfg, double t);
DecayLaw expo_mean_asym(const ModelConfig& cfg);

double a_n_coeff(double alpha, double beta, int n);
double log_a_n_coeff(double alpha, double beta, int n);

// Σ_n A_n t^{2α+n} e^{-2βt} 1F1(α, 2α+n+1, 2βt). With forced_terms > 0 exactly
// that many terms are summed and no tail certificate is attempted.
SeriesReport expo_an_series(double alpha, double beta, double t, int forced_terms = 0);

double expo_variance_exact(const ModelConfig& cfg, double t);
DecayLaw expo_variance_asym(const ModelConfig& cfg);

double w_integral(double beta, double s, int n, double t, double alpha);
double log_w_integral(double beta, double s, int n, double t, double alpha);

// Σ_n A_n s^α W(2βs, n, t) e^{-β(s+t)}: term by term for moderate βt,
// otherwise through the equivalent single integral with the 1F1 resummed.
double expo_w_series(double alpha, double beta, double s, double t);

double expo_cov_exact(const ModelConfig& cfg, double s, double t);
DecayLaw expo_cov_asym(const ModelConfig& cfg, double s);

// Largest βt for which expo_w_series sums the W terms one by one.
inline constexpr double w_series_direct_limit = 200.0;

}  // namespace ibnr
