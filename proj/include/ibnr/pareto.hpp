#pragma once

// Pareto(θ, η) delays without discounting: exact mean and asymptotic laws.

#include <functional>
#include <string>

#include "ibnr/decay_law.hpp"
#include "ibnr/model.hpp"

namespace ibnr {

enum class ParetoQuantity { Mean, Variance, Covariance, Correlation };

// Case split over η. Which values occur depends on the quantity:
// mean uses the η vs 1 split, variance adds η vs α, covariance splits at
// 2 - α, and correlation combines them with the (3 - α)/2 threshold.
enum class ParetoBranch {
    EtaBelowAlpha,
    EtaAtAlpha,
    AlphaToOne,               // variance: α < η < 1; correlation: α <= η < 1
    EtaBelowOne,
    EtaAtOne,
    EtaAboveOne,
    EtaBelowTwoMinusAlpha,
    EtaAtTwoMinusAlpha,
    EtaAboveTwoMinusAlpha,
    OneToMidpoint,            // 1 < η <= (3 - α)/2
    MidpointToTwoMinusAlpha,  // (3 - α)/2 < η < 2 - α
    AtLeastTwoMinusAlpha,
};

struct ParetoRegime {
    ParetoQuantity quantity;
    ParetoBranch branch;

    static ParetoRegime select(ParetoQuantity q, double eta, double alpha);
    std::string to_string() const;
};

// |η - boundary| below this selects the boundary branch.
inline constexpr double pareto_boundary_tol = 1e-9;

// G*(y) = ∫_0^y (1-x)^{-η} x^{α-1} dx. The complement 1 - y may be passed
// separately when y is within rounding of 1.
double g_star(double eta, double alpha, double y);
double g_star_complement(double eta, double alpha, double one_minus_y);

double pareto_mean_exact(const ModelConfig& cfg, double t);
DecayLaw pareto_mean_asym(const ModelConfig& cfg);

// Large-s law of J(s) = ∫_0^s (v+s-x)^{-γ} x^{-ξ} G((s-x)/(v+s-x)) dx.
DecayLaw kernel_integral_asym(double gamma, double xi, double v, const std::function<double(double)>& G);
// Direct quadrature of J(s), used to check the law.
double kernel_integral_direct(double gamma, double xi, double v, const std::function<double(double)>& G, double s);

// ∫_0^1 (1-y)^{2η-α-2} G*(y) dy for η > 1, by quadrature with the singular
// part of G* integrated analytically.
double pareto_variance_tail_integral(double eta, double alpha);

DecayLaw pareto_variance_asym(const ModelConfig& cfg);

struct CovarianceConstants {
    double mean_integral = 0.0;     // ∫_0^s E[Z(s-x)] x^{α-1} dx
    double survival_integral = 0.0; // ∫_0^s W̄(s-x) x dm(x)
};
CovarianceConstants pareto_cov_integrals(const ModelConfig& cfg, double s);

// Law in t for fixed s.
DecayLaw pareto_cov_asym(const ModelConfig& cfg, double s);

}  // namespace ibnr
