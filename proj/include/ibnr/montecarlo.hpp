#pragma once

// Path simulation of the discounted IBNR process and common-path estimators.

#include <cstdint>
#include <variant>
#include <vector>

#include "ibnr/model.hpp"
#include "ibnr/rng.hpp"

namespace ibnr {

struct PointMassClaim {
    double c;
};
struct ExponentialClaim {
    double mean;
};
struct ParetoClaim {
    double theta, eta;  // survival (θ/(θ+x))^η
};
struct LogNormalClaim {
    double mu, sigma;
};

class ClaimLaw {
public:
    using Law = std::variant<PointMassClaim, ExponentialClaim, ParetoClaim, LogNormalClaim>;

    ClaimLaw(Law law);  // validates

    static ClaimLaw point_mass(double c) { return ClaimLaw(PointMassClaim{c}); }
    static ClaimLaw exponential(double mean) { return ClaimLaw(ExponentialClaim{mean}); }
    static ClaimLaw pareto(double theta, double eta) { return ClaimLaw(ParetoClaim{theta, eta}); }
    static ClaimLaw lognormal(double mu, double sigma) { return ClaimLaw(LogNormalClaim{mu, sigma}); }
    // Lognormal law with the given first two moments.
    static ClaimLaw lognormal_with_moments(double mu1, double mu2);

    const Law& law() const { return law_; }
    double moment(int k) const;  // +inf when it does not exist
    double sample(PhiloxStream& rng) const;
    // Highest k with a finite k-th moment, capped at 8.
    int finite_moments() const;
    // Throws DomainError unless moment(k) matches cfg.mu(k) to 1e-12 relative
    // for every supplied k.
    void check_against(const ModelConfig& cfg) const;

private:
    Law law_;
};

struct SimulationPath {
    std::vector<double> arrivals;
    std::vector<double> delays;
    std::vector<double> claims;
    double horizon = 0.0;
};

inline constexpr std::size_t max_path_events = 10'000'000;

double sample_interarrival(const RenewalModel& model, PhiloxStream& rng);
double sample_delay(const DelayDistribution& delay, PhiloxStream& rng);
SimulationPath sample_path(const ModelConfig& cfg, const ClaimLaw& claim, double horizon, PhiloxStream& rng);

double evaluate_z(const SimulationPath& path, double t, double delta);
// Z at every time in ts (any order) with a single sweep over the path.
std::vector<double> evaluate_z(const SimulationPath& path, const std::vector<double>& ts, double delta);

enum class TargetKind { Mean, Variance, Covariance, Correlation, JointMoment };

struct Target {
    TargetKind kind = TargetKind::Mean;
    double s = 0.0;  // ignored by Mean / Variance
    double t = 0.0;
    int n = 1, m = 1;  // JointMoment: E[Z(s)^n Z(t)^m]
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    bool reliable = true;  // false when the claim law lacks the moments the SE needs
};

struct SimulationOptions {
    long n_paths = 100000;
    std::uint64_t seed = 1;
    int threads = 0;           // 0: hardware concurrency capped by IBNR_THREADS
    int correlation_batches = 20;
};

// Worker count actually used for a request.
int resolve_threads(int requested);

std::vector<Estimate> estimate(const ModelConfig& cfg, const ClaimLaw& claim, const std::vector<Target>& targets,
                               const SimulationOptions& opt);

// Mean event count N(t) with its standard error, for checking the sampler.
Estimate estimate_count(const RenewalModel& model, double t, const SimulationOptions& opt);

}  // namespace ibnr
