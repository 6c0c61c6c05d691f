#pragma once

// Long- versus short-range dependence of the IBNR process, read off the
// decay of Corr[Z(s), Z(t)] in t.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ibnr/decay_law.hpp"
#include "ibnr/model.hpp"

namespace ibnr {

enum class Dependence { LRD, SRD };
enum class Definition { PowerLaw, Integral };  // power-exponent test / integrability test

const char* to_string(Dependence d);

struct PowerLawCriterion {
    double d;  // Corr ~ t^{-d}
};
struct IntegralCriterion {
    bool integrable;
};

struct DependenceClass {
    Dependence kind;
    std::variant<PowerLawCriterion, IntegralCriterion> criterion;
    DecayLaw decay;
    // Set when the power-law test was requested but the law is not a pure
    // power; the verdict then comes from the integrability test.
    bool power_law_inapplicable = false;
};

// Corr[Z(s), Z(t)] as t -> inf for exponential or Pareto delays.
DecayLaw correlation_decay(const ModelConfig& cfg, double s);

// ∫^∞ |law| dt < ∞ (requires exp_rate >= 0).
bool integrable(const DecayLaw& law);

DependenceClass classify(const DecayLaw& decay, Definition def);

// Symbolic cell of the summary table the configuration falls in.
struct TableCell {
    std::string region;    // e.g. "alpha <= eta < 1"
    std::string exponent;  // e.g. "-(eta+alpha)/2"
    Dependence verdict;
};
TableCell table_cell(const ModelConfig& cfg);

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// OLS of ln corr on ln t. Needs >= 5 points over >= 2 decades, corr > 0.
PowerFit empirical_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace ibnr
