#include "ibnr/renewal.hpp"

#include <cmath>

#include "ibnr/errors.hpp"
#include "ibnr/specfun.hpp"

namespace ibnr {

void RenewalModel::validate() const {
    if (!(alpha > 0 && alpha <= 1)) throw DomainError("alpha must lie in (0, 1]");
    if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
}

double renewal_function(const RenewalModel& m, double t) {
    if (!(t >= 0)) throw DomainError("renewal_function requires t >= 0");
    if (m.is_poisson()) return m.lambda * t;
    return m.lambda * std::pow(t, m.alpha) / gamma_fn(1.0 + m.alpha);
}

double renewal_density(const RenewalModel& m, double t) {
    if (m.is_poisson()) {
        if (!(t >= 0)) throw DomainError("renewal_density requires t >= 0");
        return m.lambda;
    }
    if (!(t > 0)) throw DomainError("renewal_density diverges at t = 0 when alpha < 1");
    return m.lambda * std::pow(t, m.alpha - 1.0) / gamma_fn(m.alpha);
}

double count_variance(const RenewalModel& m, double t) {
    const double mt = renewal_function(m, t);
    if (m.is_poisson()) return mt;
    const double bracket = m.alpha * beta_fn(m.alpha, 0.5) / std::pow(2.0, 2.0 * m.alpha - 1.0) - 1.0;
    return mt + mt * mt * bracket;
}

double interarrival_survival(const RenewalModel& m, double t) {
    if (!(t >= 0)) throw DomainError("interarrival_survival requires t >= 0");
    if (m.is_poisson()) return std::exp(-m.lambda * t);
    return mittag_leffler(m.alpha, -m.lambda * std::pow(t, m.alpha));
}

}  // namespace ibnr
