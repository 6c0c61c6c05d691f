#pragma once

// Distribution-agnostic moments of the discounted IBNR process by quadrature
// against the fractional Poisson renewal measure.

#include <vector>

#include "ibnr/model.hpp"
#include "ibnr/quadrature.hpp"

namespace ibnr {

double dh_transform(const DelayDistribution& delay, double u, double v, const QuadratureControl& ctl = {});

// Barycentric interpolant on Chebyshev points of the second kind, in the
// variable u = x^alpha where the moment functions are smooth.
class ChebyshevGrid {
public:
    ChebyshevGrid() = default;
    ChebyshevGrid(double x_max, double alpha, int points);

    int size() const { return static_cast<int>(nodes_.size()); }
    double node_x(int k) const;
    void set_value(int k, double v) { values_[static_cast<std::size_t>(k)] = v; }
    double operator()(double x) const;

private:
    double alpha_ = 1.0;
    double u_max_ = 0.0;
    std::vector<double> nodes_, weights_, values_;
};

// E[Z^i(x)] for 0 <= i <= order and x in [0, horizon], memoized on grids.
class MarginalMomentTable {
public:
    MarginalMomentTable(const ModelConfig& cfg, int order, double horizon, const QuadratureControl& ctl);

    double operator()(int i, double x) const;
    int order() const { return static_cast<int>(grids_.size()); }
    double horizon() const { return horizon_; }

private:
    double horizon_;
    std::vector<ChebyshevGrid> grids_;  // grids_[i-1] holds order i
};

class Engine {
public:
    explicit Engine(ModelConfig cfg, QuadratureControl ctl = {});

    const ModelConfig& config() const { return cfg_; }
    const QuadratureControl& control() const { return ctl_; }

    double dh(double u, double v) const { return dh_transform(cfg_.delay, u, v, ctl_); }
    double mean(double t) const;
    double variance(double t) const;
    double covariance(double s, double t) const;
    double correlation(double s, double t) const;
    double marginal_moment(int n, double t) const;
    double joint_moment(int n, int m, double s, double t) const;

    // ∫_0^tau g(x) dm(x) with the renewal singularity at 0 removed by x = u^{1/alpha}.
    template <class G>
    double integrate_dm(G&& g, double tau, const QuadratureControl& ctl) const;

private:
    // e^{-delta x} E[Z(t - x)] - E[Z(t)], evaluated without cancellation.
    double shifted_mean_gap(double t, double x, const QuadratureControl& ctl) const;
    double mean_with(double t, const QuadratureControl& ctl) const;

    ModelConfig cfg_;
    QuadratureControl ctl_;
    double dm_u_weight_;  // lambda / Gamma(1 + alpha)
};

double mean_ibnr(const ModelConfig& cfg, double t, const QuadratureControl& ctl = {});
double marginal_moment(const ModelConfig& cfg, int n, double t, const QuadratureControl& ctl = {});
double joint_moment(const ModelConfig& cfg, int n, int m, double s, double t, const QuadratureControl& ctl = {});
double covariance(const ModelConfig& cfg, double s, double t, const QuadratureControl& ctl = {});
double variance(const ModelConfig& cfg, double t, const QuadratureControl& ctl = {});
double correlation(const ModelConfig& cfg, double s, double t, const QuadratureControl& ctl = {});

template <class G>
double Engine::integrate_dm(G&& g, double tau, const QuadratureControl& ctl) const {
    if (!(tau > 0)) return 0.0;
    const RenewalModel& r = cfg_.renewal;
    const double h0 = 1e-3 * std::min(1.0, tau);
    if (r.is_poisson()) {
        auto f = [&](double v) { return g(tau - v); };
        return r.lambda * integrate(f, decade_points(0.0, tau, h0), ctl);
    }
    const double a = r.alpha;
    const double half = 0.5 * tau;
    auto lower = [&](double u) { return g(std::pow(u, 1.0 / a)); };
    const double lo = dm_u_weight_ * integrate(lower, {0.0, std::pow(half, a)}, ctl);
    const double dens = a * dm_u_weight_;  // lambda / Gamma(alpha)
    auto upper = [&](double v) {
        const double x = tau - v;
        return g(x) * dens * std::pow(x, a - 1.0);
    };
    const double hi = integrate(upper, decade_points(0.0, half, h0), ctl);
    return lo + hi;
}

}  // namespace ibnr
