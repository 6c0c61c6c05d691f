#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ibnr/quadrature.hpp"

namespace ibnr {

struct ExponentialDelay {
    double beta;  // rate; E[L] = 1/beta
};

// Lomax form: survival (theta / (theta + x))^eta.
struct ParetoDelay {
    double theta;
    double eta;
};

// Tabulated law. Survival is interpolated by monotone cubic (Fritsch-Carlson)
// Hermite segments, density linearly. Past the last knot the survival decays
// with the constant hazard density_end / survival_end.
struct CustomDelay {
    std::vector<double> x;
    std::vector<double> survival;
    std::vector<double> density;
    std::vector<double> slope;  // PCHIP derivatives of survival at the knots
};

class DelayDistribution {
public:
    enum class Kind { Exponential, Pareto, Custom };

    DelayDistribution() : law_(ExponentialDelay{1.0}) {}
    static DelayDistribution exponential(double beta);
    static DelayDistribution pareto(double theta, double eta);
    static DelayDistribution custom(std::vector<double> x, std::vector<double> survival,
                                    std::vector<double> density);

    Kind kind() const { return static_cast<Kind>(law_.index()); }
    const ExponentialDelay* as_exponential() const { return std::get_if<ExponentialDelay>(&law_); }
    const ParetoDelay* as_pareto() const { return std::get_if<ParetoDelay>(&law_); }
    const CustomDelay* as_custom() const { return std::get_if<CustomDelay>(&law_); }

    double survival(double x) const;
    double density(double x) const;
    // E[L]; +infinity when the mean does not exist.
    double mean() const;
    // E[e^{-uL}].
    double laplace(double u, const QuadratureControl& ctl = {}) const;
    // Dickson-Hipp transform of the density: ∫_v^∞ e^{-u(y-v)} w(y) dy.
    double dh_transform(double u, double v, const QuadratureControl& ctl = {}) const;
    // Inverse survival: the delay L with survival(L) = p, p in (0, 1].
    double quantile_survival(double p) const;

    std::string describe() const;

private:
    explicit DelayDistribution(std::variant<ExponentialDelay, ParetoDelay, CustomDelay> law)
        : law_(std::move(law)) {}
    std::variant<ExponentialDelay, ParetoDelay, CustomDelay> law_;
};

}  // namespace ibnr
