#include "ibnr/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ibnr/errors.hpp"
#include "ibnr/model.hpp"

namespace ibnr {

namespace {

// Fritsch-Carlson slopes for a monotone piecewise cubic through (x, y).
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0), del(n - 1), h(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        d[0] = d[1] = del[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0) continue;
        const double w1 = 2 * h[k] + h[k - 1];
        const double w2 = h[k] + 2 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
    // One-sided three-point end slopes, limited to preserve monotonicity.
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0) s = 0;
        else if (d0 * d1 <= 0 && std::abs(s) > 3 * std::abs(d0)) s = 3 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], del[0], del[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return d;
}

std::size_t segment_of(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    if (k == 0) return 0;
    return std::min(k - 1, x.size() - 2);
}

double custom_hazard_tail(const CustomDelay& c) {
    const double s = c.survival.back();
    return s > 0 ? c.density.back() / s : 0.0;
}

double custom_survival(const CustomDelay& c, double v) {
    if (v <= 0) return 1.0;
    if (v >= c.x.back()) {
        const double s = c.survival.back();
        if (s == 0) return 0.0;
        return s * std::exp(-custom_hazard_tail(c) * (v - c.x.back()));
    }
    const std::size_t k = segment_of(c.x, v);
    const double h = c.x[k + 1] - c.x[k];
    const double t = (v - c.x[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * c.survival[k] + (t3 - 2 * t2 + t) * h * c.slope[k] +
                       (-2 * t3 + 3 * t2) * c.survival[k + 1] + (t3 - t2) * h * c.slope[k + 1];
    return std::clamp(val, 0.0, 1.0);
}

double custom_density(const CustomDelay& c, double v) {
    if (v < 0) return 0.0;
    if (v >= c.x.back()) {
        const double s = c.survival.back();
        if (s == 0) return 0.0;
        return c.density.back() * std::exp(-custom_hazard_tail(c) * (v - c.x.back()));
    }
    const std::size_t k = segment_of(c.x, v);
    const double t = (v - c.x[k]) / (c.x[k + 1] - c.x[k]);
    return (1 - t) * c.density[k] + t * c.density[k + 1];
}

}  // namespace

DelayDistribution DelayDistribution::exponential(double beta) {
    if (!(beta > 0) || !std::isfinite(beta)) throw DomainError("exponential delay requires beta > 0");
    return DelayDistribution(ExponentialDelay{beta});
}

DelayDistribution DelayDistribution::pareto(double theta, double eta) {
    if (!(theta > 0) || !(eta > 0) || !std::isfinite(theta) || !std::isfinite(eta))
        throw DomainError("Pareto delay requires theta > 0 and eta > 0");
    return DelayDistribution(ParetoDelay{theta, eta});
}

DelayDistribution DelayDistribution::custom(std::vector<double> x, std::vector<double> survival,
                                            std::vector<double> density) {
    const std::size_t n = x.size();
    if (n < 2 || survival.size() != n || density.size() != n)
        throw DomainError("custom delay tables need at least two knots and equal lengths");
    if (x[0] != 0.0) throw DomainError("custom delay table must start at x = 0");
    if (std::abs(survival[0] - 1.0) > 1e-12) throw DomainError("custom delay survival must equal 1 at 0");
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && !(x[k] > x[k - 1])) throw DomainError("custom delay knots must be strictly increasing");
        if (k > 0 && survival[k] > survival[k - 1])
            throw DomainError("custom delay survival must be nonincreasing");
        if (!(survival[k] >= 0 && survival[k] <= 1)) throw DomainError("custom delay survival must lie in [0, 1]");
        if (!(density[k] >= 0) || !std::isfinite(density[k]))
            throw DomainError("custom delay density must be nonnegative");
    }
    if (survival.back() > 0 && density.back() <= 0)
        throw DomainError("custom delay: survival does not reach 0, so the last density must be positive");
    CustomDelay c{std::move(x), std::move(survival), std::move(density), {}};
    c.slope = pchip_slopes(c.x, c.survival);
    return DelayDistribution(std::move(c));
}

double DelayDistribution::survival(double x) const {
    if (x <= 0) return 1.0;
    if (auto e = as_exponential()) return std::exp(-e->beta * x);
    if (auto p = as_pareto()) return std::pow(p->theta / (p->theta + x), p->eta);
    return custom_survival(*as_custom(), x);
}

double DelayDistribution::density(double x) const {
    if (x < 0) return 0.0;
    if (auto e = as_exponential()) return e->beta * std::exp(-e->beta * x);
    if (auto p = as_pareto()) return p->eta / p->theta * std::pow(p->theta / (p->theta + x), p->eta + 1.0);
    return custom_density(*as_custom(), x);
}

double DelayDistribution::mean() const {
    if (auto e = as_exponential()) return 1.0 / e->beta;
    if (auto p = as_pareto())
        return p->eta > 1 ? p->theta / (p->eta - 1.0) : std::numeric_limits<double>::infinity();
    const CustomDelay& c = *as_custom();
    double body = 0.0;
    for (std::size_t k = 0; k + 1 < c.x.size(); ++k)
        body += integrate([&](double v) { return custom_survival(c, v); }, {c.x[k], c.x[k + 1]});
    const double h = custom_hazard_tail(c);
    return body + (h > 0 ? c.survival.back() / h : 0.0);
}

double DelayDistribution::laplace(double u, const QuadratureControl& ctl) const {
    if (!(u >= 0)) throw DomainError("laplace transform requires u >= 0");
    if (auto e = as_exponential()) return e->beta / (e->beta + u);
    return dh_transform(u, 0.0, ctl);
}

double DelayDistribution::dh_transform(double u, double v, const QuadratureControl& ctl) const {
    if (!(u >= 0) || !(v >= 0)) throw DomainError("dh_transform requires u, v >= 0");
    if (auto e = as_exponential()) return e->beta / (e->beta + u) * std::exp(-e->beta * v);
    if (u == 0.0) return survival(v);
    QuadratureControl qc = ctl;
    qc.abs_tol = 1e-300;
    qc.rel_tol = std::min(ctl.rel_tol, 1e-10);
    // Past z = 40/u the discount factor is below e^{-40} relative to the start.
    const double zmax = 40.0 / u;
    if (auto p = as_pareto()) {
        const double a = p->theta + v;
        auto f = [&](double z) {
            return std::exp(-u * z) * p->eta / p->theta * std::pow(p->theta / (a + z), p->eta + 1.0);
        };
        return integrate(f, decade_points(0.0, zmax, 1e-3 * std::min(a, 1.0 / u)), qc);
    }
    const CustomDelay& c = *as_custom();
    double total = 0.0;
    const double top = v + zmax;
    const double x_end = c.x.back();
    if (v < x_end) {
        std::vector<double> pts{v};
        for (double xk : c.x)
            if (xk > v && xk < std::min(top, x_end)) pts.push_back(xk);
        pts.push_back(std::min(top, x_end));
        total += integrate([&](double y) { return std::exp(-u * (y - v)) * custom_density(c, y); }, pts, qc);
    }
    const double h = custom_hazard_tail(c);
    if (h > 0) {
        const double y0 = std::max(v, x_end);
        total += c.density.back() * std::exp(-u * (y0 - v) - h * (y0 - x_end)) / (u + h);
    }
    return total;
}

double DelayDistribution::quantile_survival(double p) const {
    if (!(p > 0 && p <= 1)) throw DomainError("quantile_survival requires p in (0, 1]");
    if (auto e = as_exponential()) return -std::log(p) / e->beta;
    if (auto q = as_pareto()) return q->theta * std::expm1(-std::log(p) / q->eta);
    const CustomDelay& c = *as_custom();
    const double s_end = c.survival.back();
    if (p <= s_end) return c.x.back() + std::log(s_end / p) / custom_hazard_tail(c);
    // Survival is monotone; bisection on the interpolant.
    double lo = 0.0, hi = c.x.back();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (custom_survival(c, mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string DelayDistribution::describe() const {
    std::ostringstream os;
    if (auto e = as_exponential()) os << "exponential(beta=" << e->beta << ")";
    else if (auto p = as_pareto()) os << "pareto(theta=" << p->theta << ", eta=" << p->eta << ")";
    else os << "custom(" << as_custom()->x.size() << " knots)";
    return os.str();
}

void ModelConfig::validate() const {
    renewal.validate();
    if (!(delta >= 0) || !std::isfinite(delta)) throw DomainError("delta must be >= 0");
    if (claim_moments.empty()) throw DomainError("at least the first claim moment is required");
    for (double m : claim_moments)
        if (!(m > 0) || !std::isfinite(m)) throw DomainError("claim moments must be positive and finite");
    if (claim_moments.size() >= 2 && claim_moments[1] < claim_moments[0] * claim_moments[0] * (1 - 1e-12))
        throw DomainError("claim moments violate mu2 >= mu1^2");
}

double ModelConfig::mu(int k) const {
    if (k == 0) return 1.0;
    if (k < 0 || k > max_moment()) {
        std::ostringstream os;
        os << "claim moment of order " << k << " is not available (K = " << max_moment() << ")";
        throw DomainError(os.str());
    }
    return claim_moments[static_cast<std::size_t>(k - 1)];
}

}  // namespace ibnr
