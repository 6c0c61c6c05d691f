#pragma once

#include <vector>

#include "ibnr/delay.hpp"
#include "ibnr/renewal.hpp"

namespace ibnr {

// One problem instance: arrivals, discounting, delay law and claim moments
// mu_1..mu_K (mu_0 = 1 is implied).
struct ModelConfig {
    RenewalModel renewal;
    double delta = 0.0;
    DelayDistribution delay;
    std::vector<double> claim_moments{1.0};

    void validate() const;
    int max_moment() const { return static_cast<int>(claim_moments.size()); }
    double mu(int k) const;
};

}  // namespace ibnr
