#include "ibnr/engine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ibnr/errors.hpp"
#include "ibnr/specfun.hpp"

namespace ibnr {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

QuadratureControl inner_of(const QuadratureControl& ctl) { return ctl.scaled(1e-2); }

void check_order(double s, double t) {
    if (!(s > 0) || !(s <= t)) throw DomainError("expected 0 < s <= t");
}

}  // namespace

double dh_transform(const DelayDistribution& delay, double u, double v, const QuadratureControl& ctl) {
    return delay.dh_transform(u, v, ctl);
}

ChebyshevGrid::ChebyshevGrid(double x_max, double alpha, int points)
    : alpha_(alpha), u_max_(std::pow(x_max, alpha)) {
    const int n = points;
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    values_.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(std::numbers::pi * k / (n - 1));
        nodes_[static_cast<std::size_t>(k)] = 0.5 * u_max_ * (1.0 - c);
        double w = (k % 2 == 0) ? 1.0 : -1.0;
        if (k == 0 || k == n - 1) w *= 0.5;
        weights_[static_cast<std::size_t>(k)] = w;
    }
    nodes_.front() = 0.0;
    nodes_.back() = u_max_;
}

double ChebyshevGrid::node_x(int k) const {
    const double u = nodes_[static_cast<std::size_t>(k)];
    return alpha_ == 1.0 ? u : std::pow(u, 1.0 / alpha_);
}

double ChebyshevGrid::operator()(double x) const {
    double u = alpha_ == 1.0 ? x : std::pow(std::max(x, 0.0), alpha_);
    u = std::clamp(u, 0.0, u_max_);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const double d = u - nodes_[k];
        if (d == 0.0) return values_[k];
        const double w = weights_[k] / d;
        num += w * values_[k];
        den += w;
    }
    return num / den;
}

Engine::Engine(ModelConfig cfg, QuadratureControl ctl) : cfg_(std::move(cfg)), ctl_(ctl) {
    cfg_.validate();
    ctl_.validate();
    dm_u_weight_ = cfg_.renewal.lambda / gamma_fn(1.0 + cfg_.renewal.alpha);
}

double Engine::mean_with(double t, const QuadratureControl& ctl) const {
    if (!(t >= 0)) throw DomainError("mean requires t >= 0");
    if (t == 0.0) return 0.0;
    const double d = cfg_.delta;
    const double I = integrate_dm([&](double x) { return dh_transform(cfg_.delay, d, t - x, ctl); }, t, ctl);
    return cfg_.mu(1) * std::exp(-d * t) * I;
}

double Engine::mean(double t) const { return mean_with(t, ctl_); }

double Engine::shifted_mean_gap(double t, double x, const QuadratureControl& ctl) const {
    // e^{-δx}E[Z(t-x)] - E[Z(t)] = μ1 e^{-δt} { ∫_0^{t-x} T(t-x-y)[1-(1+x/y)^{α-1}] dm(y) - ∫_0^x T(t-y) dm(y) }
    const double d = cfg_.delta;
    const double a = cfg_.renewal.alpha;
    double first = 0.0;
    if (a < 1.0 && t - x > 0) {
        const double tau = t - x;
        first = integrate_dm(
            [&](double y) {
                if (y <= 0) return dh_transform(cfg_.delay, d, tau, ctl);
                const double factor = -std::expm1((a - 1.0) * std::log1p(x / y));
                return dh_transform(cfg_.delay, d, tau - y, ctl) * factor;
            },
            tau, ctl);
    }
    // Arrivals in [0, x]; with v = x - y the kernel is T(t - x + v).
    const double second = integrate_dm([&](double y) { return dh_transform(cfg_.delay, d, t - y, ctl); }, x, ctl);
    return cfg_.mu(1) * std::exp(-d * t) * (first - second);
}

double Engine::variance(double t) const {
    if (!(t > 0)) throw DomainError("variance requires t > 0");
    const double d = cfg_.delta;
    const double mu1 = cfg_.mu(1), mu2 = cfg_.mu(2);
    const QuadratureControl in = inner_of(ctl_);
    if (cfg_.renewal.is_poisson() && d == 0.0) {
        const double I = integrate([&](double x) { return cfg_.delay.survival(x); }, decade_points(0.0, t, 1e-3), ctl_);
        return cfg_.renewal.lambda * mu2 * I;
    }
    const double A = integrate_dm(
        [&](double x) {
            return std::exp(-d * x) * mean_with(t - x, in) * dh_transform(cfg_.delay, d, t - x, in);
        },
        t, ctl_);
    const double B = integrate_dm([&](double x) { return dh_transform(cfg_.delay, 2 * d, t - x, in); }, t, ctl_);
    const double m = mean_with(t, in);
    const double first = 2 * mu1 * std::exp(-d * t) * A;
    const double second = mu2 * std::exp(-2 * d * t) * B;
    const double v = first + second - m * m;
    const double tol = 10 * (ctl_.abs_tol + ctl_.rel_tol * (std::abs(first) + std::abs(second) + m * m));
    if (v < -tol) {
        std::ostringstream os;
        os << "variance evaluated negative (" << v << ") beyond quadrature tolerance " << tol;
        throw NumericalError(os.str());
    }
    return v;
}

double Engine::covariance(double s, double t) const {
    check_order(s, t);
    const double d = cfg_.delta;
    const double mu1 = cfg_.mu(1), mu2 = cfg_.mu(2);
    const QuadratureControl in = inner_of(ctl_);
    if (cfg_.renewal.is_poisson() && d == 0.0) {
        // v = s - x, so the survival argument t - s + v starts at the gap.
        const double I = integrate([&](double v) { return cfg_.delay.survival(t - s + v); },
                                   decade_points(0.0, s, 1e-3), ctl_);
        return cfg_.renewal.lambda * mu2 * I;
    }
    // First integral minus the mean product, folded together.
    const double A = integrate_dm(
        [&](double x) { return shifted_mean_gap(t, x, in) * dh_transform(cfg_.delay, d, s - x, in); }, s, ctl_);
    const double B = integrate_dm([&](double x) { return dh_transform(cfg_.delay, 2 * d, t - x, in); }, s, ctl_);
    const double C = integrate_dm(
        [&](double x) {
            return std::exp(-d * x) * mean_with(s - x, in) * dh_transform(cfg_.delay, d, t - x, in);
        },
        s, ctl_);
    return mu1 * std::exp(-d * s) * A + mu2 * std::exp(-2 * d * t) * B + mu1 * std::exp(-d * t) * C;
}

double Engine::correlation(double s, double t) const {
    check_order(s, t);
    const double vs = variance(s);
    const double vt = s == t ? vs : variance(t);
    if (!(vs > 0) || !(vt > 0)) throw NumericalError("correlation undefined: zero variance");
    const double c = covariance(s, t) / std::sqrt(vs * vt);
    if (std::abs(c) > 1.0 + 1e-6) {
        std::ostringstream os;
        os << "correlation " << c << " outside [-1, 1]";
        throw NumericalError(os.str());
    }
    return std::clamp(c, -1.0, 1.0);
}

MarginalMomentTable::MarginalMomentTable(const ModelConfig& cfg, int order, double horizon,
                                         const QuadratureControl& ctl)
    : horizon_(horizon) {
    if (order > 4) throw DomainError("moment recursion is supported up to order 4");
    const Engine eng(cfg, ctl);
    const double d = cfg.delta;
    const QuadratureControl in = inner_of(ctl);
    for (int n = 1; n <= order; ++n) {
        (void)cfg.mu(n);
        ChebyshevGrid g(horizon, cfg.renewal.alpha, ctl.grid_points);
        for (int k = 0; k < g.size(); ++k) {
            const double tau = g.node_x(k);
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                const double coef = cfg.mu(n - i) * binom(n, i) * std::exp(-(n - i) * d * tau);
                const double I = eng.integrate_dm(
                    [&](double x) {
                        const double lower = (*this)(i, tau - x);
                        return std::exp(-i * d * x) * dh_transform(cfg.delay, (n - i) * d, tau - x, in) * lower;
                    },
                    tau, ctl);
                total += coef * I;
            }
            g.set_value(k, total);
        }
        grids_.push_back(std::move(g));
    }
}

double MarginalMomentTable::operator()(int i, double x) const {
    if (i == 0) return 1.0;
    if (x <= 0) return 0.0;
    return grids_[static_cast<std::size_t>(i - 1)](x);
}

double Engine::marginal_moment(int n, double t) const {
    if (n < 0) throw DomainError("moment order must be >= 0");
    if (!(t >= 0)) throw DomainError("marginal_moment requires t >= 0");
    if (n == 0) return 1.0;
    if (n > 4) throw DomainError("moment recursion is supported up to order 4");
    (void)cfg_.mu(n);
    if (t == 0.0) return 0.0;
    if (n == 1) return mean(t);
    const MarginalMomentTable table(cfg_, n - 1, t, ctl_);
    const double d = cfg_.delta;
    const QuadratureControl in = inner_of(ctl_);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double coef = cfg_.mu(n - i) * binom(n, i) * std::exp(-(n - i) * d * t);
        const double I = integrate_dm(
            [&](double x) {
                return std::exp(-i * d * x) * dh_transform(cfg_.delay, (n - i) * d, t - x, in) * table(i, t - x);
            },
            t, ctl_);
        total += coef * I;
    }
    return total;
}

double Engine::joint_moment(int n, int m, double s, double t) const {
    if (n < 0 || m < 0) throw DomainError("moment orders must be >= 0");
    check_order(s, t);
    if (n + m > 4) throw DomainError("joint moments are supported up to total order 4");
    (void)cfg_.mu(n + m);
    if (m == 0) return marginal_moment(n, s);
    if (n == 0) return marginal_moment(m, t);
    const double h = t - s;
    const double d = cfg_.delta;
    const QuadratureControl in = inner_of(ctl_);
    const MarginalMomentTable marg(cfg_, std::max(n, m), t, ctl_);

    // g[i][j](σ) = E[Z^i(σ) Z^j(σ + h)] on σ ∈ [0, s]; built in order of j then i.
    std::vector<std::vector<ChebyshevGrid>> g(static_cast<std::size_t>(n + 1),
                                              std::vector<ChebyshevGrid>(static_cast<std::size_t>(m + 1)));
    auto G = [&](int i, int j, double sigma) -> double {
        if (i == 0 && j == 0) return 1.0;
        if (i == 0) return marg(j, sigma + h);
        if (j == 0) return marg(i, sigma);
        if (sigma <= 0) return 0.0;
        return g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](sigma);
    };
    auto recursion = [&](int a, int b, double sigma) {
        double total = 0.0;
        const double tt = sigma + h;
        for (int i = 0; i < a; ++i) {
            const double coef = cfg_.mu(a - i) * binom(a, i) * std::exp(-(a - i) * d * sigma);
            total += coef * integrate_dm(
                                [&](double x) {
                                    return std::exp(-(b + i) * d * x) * G(i, b, sigma - x) *
                                           dh_transform(cfg_.delay, (a - i) * d, sigma - x, in);
                                },
                                sigma, ctl_);
        }
        for (int j = 0; j < b; ++j) {
            for (int i = 0; i <= a; ++i) {
                const int k = a + b - i - j;
                const double coef = cfg_.mu(k) * binom(a, i) * binom(b, j) * std::exp(-k * d * tt);
                total += coef * integrate_dm(
                                    [&](double x) {
                                        return std::exp(-(i + j) * d * x) * G(i, j, sigma - x) *
                                               dh_transform(cfg_.delay, k * d, tt - x, in);
                                    },
                                    sigma, ctl_);
            }
        }
        return total;
    };
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= n; ++i) {
            if (i == n && j == m) continue;
            ChebyshevGrid grid(s, cfg_.renewal.alpha, ctl_.grid_points);
            for (int k = 0; k < grid.size(); ++k) {
                const double sigma = grid.node_x(k);
                grid.set_value(k, sigma > 0 ? recursion(i, j, sigma) : 0.0);
            }
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(grid);
        }
    }
    return recursion(n, m, s);
}

double mean_ibnr(const ModelConfig& cfg, double t, const QuadratureControl& ctl) { return Engine(cfg, ctl).mean(t); }
double marginal_moment(const ModelConfig& cfg, int n, double t, const QuadratureControl& ctl) {
    return Engine(cfg, ctl).marginal_moment(n, t);
}
double joint_moment(const ModelConfig& cfg, int n, int m, double s, double t, const QuadratureControl& ctl) {
    return Engine(cfg, ctl).joint_moment(n, m, s, t);
}
double covariance(const ModelConfig& cfg, double s, double t, const QuadratureControl& ctl) {
    return Engine(cfg, ctl).covariance(s, t);
}
double variance(const ModelConfig& cfg, double t, const QuadratureControl& ctl) {
    return Engine(cfg, ctl).variance(t);
}
double correlation(const ModelConfig& cfg, double s, double t, const QuadratureControl& ctl) {
    return Engine(cfg, ctl).correlation(s, t);
}

}  // namespace ibnr
