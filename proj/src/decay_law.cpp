#include "ibnr/decay_law.hpp"

#include <cmath>
#include <sstream>

#include "ibnr/errors.hpp"

namespace ibnr {

double DecayLaw::operator()(double t) const {
    if (!(t > 1)) throw DomainError("DecayLaw is evaluated for t > 1 only");
    double v = constant * std::pow(t, power) * std::exp(-exp_rate * t);
    if (log_power != 0.0) v *= std::pow(std::log(t), log_power);
    return v;
}

std::string DecayLaw::to_string() const {
    std::ostringstream os;
    os.precision(6);
    os << constant << " * t^" << power;
    if (log_power != 0.0) os << " * (ln t)^" << log_power;
    if (exp_rate != 0.0) os << " * exp(-" << exp_rate << " t)";
    return os.str();
}

std::partial_ordering compare_growth(const DecayLaw& a, const DecayLaw& b) {
    if (auto c = (-a.exp_rate) <=> (-b.exp_rate); c != 0) return c;
    if (auto c = a.power <=> b.power; c != 0) return c;
    return a.log_power <=> b.log_power;
}

DecayLaw divide_by_sqrt(const DecayLaw& num, double var_s, const DecayLaw& var_t) {
    if (!(var_s > 0) || !(var_t.constant > 0)) throw NumericalError("correlation law needs positive variances");
    return {num.constant / std::sqrt(var_s * var_t.constant), num.power - 0.5 * var_t.power,
            num.log_power - 0.5 * var_t.log_power, num.exp_rate - 0.5 * var_t.exp_rate};
}

}  // namespace ibnr
