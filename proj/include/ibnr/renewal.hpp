#pragma once

namespace ibnr {

// Fractional Poisson counting process: Mittag-Leffler interarrivals of index
// alpha, rate lambda (units time^{-alpha}). alpha = 1 is ordinary Poisson.
struct RenewalModel {
    double alpha = 1.0;
    double lambda = 1.0;

    void validate() const;
    bool is_poisson() const { return alpha == 1.0; }
};

double renewal_function(const RenewalModel& model, double t);
double renewal_density(const RenewalModel& model, double t);
double count_variance(const RenewalModel& model, double t);
double interarrival_survival(const RenewalModel& model, double t);


}  // namespace ibnr
