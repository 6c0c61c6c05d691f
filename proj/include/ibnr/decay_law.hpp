#pragma once

#include <compare>
#include <string>

namespace ibnr {

// C * t^p * (ln t)^q * e^{-r t}. The log power is a double so that the
// square-root logarithm of the correlation laws (q = -1/2) is representable.
struct DecayLaw {
    double constant = 0.0;
    double power = 0.0;
    double log_power = 0.0;
    double exp_rate = 0.0;

    double operator()(double t) const;
    std::string to_string() const;
};

// Growth order: greater means the law dominates (decays more slowly) as t -> inf.
// Lexicographic in (-r, p, q); constants are ignored.
std::partial_ordering compare_growth(const DecayLaw& a, const DecayLaw& b);

// Ratio law a / sqrt(b * c), used to build correlations.
DecayLaw divide_by_sqrt(const DecayLaw& num, double var_s, const DecayLaw& var_t);

}  // namespace ibnr
