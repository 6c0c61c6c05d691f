#include "ibnr/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ibnr/errors.hpp"
#include "ibnr/quadrature.hpp"
#include "ibnr/renewal.hpp"
#include "ibnr/specfun.hpp"

namespace ibnr {

namespace {

bool near(double a, double b) { return std::abs(a - b) < pareto_boundary_tol; }

const ParetoDelay& require_pareto(const ModelConfig& cfg) {
    cfg.validate();
    const ParetoDelay* p = cfg.delay.as_pareto();
    if (!p) throw DomainError("this evaluator requires a Pareto delay");
    if (cfg.delta != 0.0) throw DomainError("Pareto evaluators are defined for delta = 0 only");
    return *p;
}

void require_fractional(const ModelConfig& cfg) {
    if (!(cfg.renewal.alpha < 1.0)) throw DomainError("asymptotic laws require 0 < alpha < 1");
}

QuadratureControl tight() {
    QuadratureControl q;
    q.abs_tol = 1e-300;
    q.rel_tol = 1e-12;
    q.max_depth = 60;
    return q;
}

// Points in the log variable r = -ln(1 - x) covering [r0, r1].
std::vector<double> log_points(double r0, double r1) {
    std::vector<double> p{r0};
    for (double r = 1.0; r < r1; r *= 2.0)
        if (r > r0) p.push_back(r);
    p.push_back(r1);
    return p;
}

double g_star_impl(double eta, double alpha, double y, double c) {
    if (!(alpha > 0) || !(eta > 0)) throw DomainError("g_star requires alpha, eta > 0");
    if (y < 0 || c < 0) throw DomainError("g_star requires 0 <= y <= 1");
    if (y == 0) return 0.0;
    if (c == 0) {
        if (eta >= 1) throw DomainError("g_star diverges at y = 1 when eta >= 1");
        return beta_fn(alpha, 1.0 - eta);
    }
    const QuadratureControl q = tight();
    const double split = std::min(y, 0.5);
    // x = u^{1/α} absorbs x^{α-1}.
    auto lower = [&](double u) { return std::pow(1.0 - std::pow(u, 1.0 / alpha), -eta) / alpha; };
    double v = integrate(lower, {0.0, std::pow(split, alpha)}, q);
    if (y > 0.5) {
        // x = 1 - e^{-r}: (1-x)^{-η} dx = e^{(η-1) r} dr.
        auto upper = [&](double r) {
            return std::exp((eta - 1.0) * r + (alpha - 1.0) * std::log1p(-std::exp(-r)));
        };
        v += integrate(upper, log_points(std::log(2.0), -std::log(c)), q);
    }
    return v;
}

// R(y) = G*(y) - ((1-y)^{1-η} - 1)/(η - 1) = ∫_0^y (1-x)^{-η}(x^{α-1} - 1) dx.
double g_star_regular(double eta, double alpha, double r_end) {
    QuadratureControl q = tight();
    q.rel_tol = 1e-11;
    const double y = -std::expm1(-r_end);
    const double split = std::min(y, 0.5);
    auto lower = [&](double u) {
        const double w = std::pow(u, 1.0 / alpha - 1.0);
        const double x = u * w;
        return std::pow(1.0 - x, -eta) * (1.0 - w) / alpha;
    };
    double v = integrate(lower, {0.0, std::pow(split, alpha)}, q);
    if (y > 0.5) {
        auto upper = [&](double r) {
            const double lx = std::log1p(-std::exp(-r));
            return std::exp((eta - 1.0) * r) * std::expm1((alpha - 1.0) * lx);
        };
        v += integrate(upper, log_points(std::log(2.0), r_end), q);
    }
    return v;
}

}  // namespace

ParetoRegime ParetoRegime::select(ParetoQuantity q, double eta, double alpha) {
    if (!(eta > 0) || !(alpha > 0 && alpha <= 1)) throw DomainError("regime selection requires eta > 0, 0 < alpha <= 1");
    using B = ParetoBranch;
    const double two = 2.0 - alpha, mid = 0.5 * (3.0 - alpha);
    B b{};
    switch (q) {
    case ParetoQuantity::Mean:
        b = near(eta, 1.0) ? B::EtaAtOne : eta < 1.0 ? B::EtaBelowOne : B::EtaAboveOne;
        break;
    case ParetoQuantity::Variance:
        if (near(eta, 1.0)) b = B::EtaAtOne;
        else if (near(eta, alpha)) b = B::EtaAtAlpha;
        else if (eta < alpha) b = B::EtaBelowAlpha;
        else if (eta < 1.0) b = B::AlphaToOne;
        else b = B::EtaAboveOne;
        break;
    case ParetoQuantity::Covariance:
        b = near(eta, two) ? B::EtaAtTwoMinusAlpha : eta < two ? B::EtaBelowTwoMinusAlpha : B::EtaAboveTwoMinusAlpha;
        break;
    case ParetoQuantity::Correlation:
        if (near(eta, 1.0)) b = B::EtaAtOne;
        else if (near(eta, two) || eta > two) b = B::AtLeastTwoMinusAlpha;
        else if (near(eta, mid)) b = B::OneToMidpoint;
        else if (near(eta, alpha)) b = B::AlphaToOne;
        else if (eta < alpha) b = B::EtaBelowAlpha;
        else if (eta < 1.0) b = B::AlphaToOne;
        else if (eta < mid) b = B::OneToMidpoint;
        else b = B::MidpointToTwoMinusAlpha;
        break;
    }
    return {q, b};
}

std::string ParetoRegime::to_string() const {
    static const char* qn[] = {"mean", "variance", "covariance", "correlation"};
    static const char* bn[] = {"eta<alpha",   "eta=alpha", "alpha<eta<1",
                               "eta<1",       "eta=1",     "eta>1",
                               "eta<2-alpha", "eta=2-alpha", "eta>2-alpha",
                               "1<eta<=(3-alpha)/2", "(3-alpha)/2<eta<2-alpha", "eta>=2-alpha"};
    return std::string(qn[static_cast<int>(quantity)]) + ": " + bn[static_cast<int>(branch)];
}

double g_star(double eta, double alpha, double y) {
    if (!(y <= 1)) throw DomainError("g_star requires 0 <= y <= 1");
    return g_star_impl(eta, alpha, y, 1.0 - y);
}

double g_star_complement(double eta, double alpha, double one_minus_y) {
    if (!(one_minus_y >= 0 && one_minus_y <= 1)) throw DomainError("g_star requires 0 <= 1 - y <= 1");
    return g_star_impl(eta, alpha, 1.0 - one_minus_y, one_minus_y);
}

double pareto_mean_exact(const ModelConfig& cfg, double t) {
    const ParetoDelay& p = require_pareto(cfg);
    if (!(t >= 0)) throw DomainError("pareto_mean_exact requires t >= 0");
    if (t == 0) return 0.0;
    const double a = cfg.renewal.alpha, th = p.theta, eta = p.eta;
    const double log_pref = std::log(cfg.mu(1) * cfg.renewal.lambda) + eta * std::log(th) - log_gamma(a) -
                            (eta - a) * std::log(th + t);
    const double c = th / (th + t);
    return std::exp(log_pref) * g_star_impl(eta, a, t / (th + t), c);
}

DecayLaw pareto_mean_asym(const ModelConfig& cfg) {
    const ParetoDelay& p = require_pareto(cfg);
    require_fractional(cfg);
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, th = p.theta, eta = p.eta, mu1 = cfg.mu(1);
    switch (ParetoRegime::select(ParetoQuantity::Mean, eta, a).branch) {
    case ParetoBranch::EtaBelowOne:
        return {mu1 * lam * std::pow(th, eta) * gamma_fn(1.0 - eta) / gamma_fn(a + 1.0 - eta), a - eta, 0.0, 0.0};
    case ParetoBranch::EtaAtOne:
        return {mu1 * lam * th / gamma_fn(a), a - 1.0, 1.0, 0.0};
    default:
        return {mu1 * lam * th / ((eta - 1.0) * gamma_fn(a)), a - 1.0, 0.0, 0.0};
    }
}

DecayLaw kernel_integral_asym(double gamma, double xi, double v, const std::function<double(double)>& G) {
    if (!(gamma >= 1) || !(xi < 1) || !(v > 0)) throw DomainError("J(s) law requires gamma >= 1, xi < 1, v > 0");
    if (gamma == 1.0) return {G(1.0), -xi, 1.0, 0.0};
    auto f = [&](double r) {
        // z = 1 - e^{-r}: (1-z)^{γ-2} dz = e^{-(γ-1) r} dr.
        return std::exp(-(gamma - 1.0) * r) * G(-std::expm1(-r));
    };
    const double r_max = 46.0 / (gamma - 1.0);
    QuadratureControl q = tight();
    q.rel_tol = 1e-10;
    const double I = integrate(f, log_points(0.0, r_max), q);
    return {std::pow(v, 1.0 - gamma) * I, -xi, 0.0, 0.0};
}

double kernel_integral_direct(double gamma, double xi, double v, const std::function<double(double)>& G, double s) {
    if (!(s > 0)) throw DomainError("J(s) requires s > 0");
    auto g = [&](double x) {
        const double w = s - x;
        return std::pow(v + w, -gamma) * G(w / (v + w));
    };
    QuadratureControl q = tight();
    q.rel_tol = 1e-10;
    // x = u^{1/(1-ξ)} absorbs x^{-ξ} on the lower half.
    const double k = 1.0 - xi;
    auto lower = [&](double u) { return g(std::pow(u, 1.0 / k)) / k; };
    const double lo = integrate(lower, {0.0, std::pow(0.5 * s, k)}, q);
    auto upper = [&](double w) { return g(s - w) * std::pow(s - w, -xi); };
    const double hi = integrate(upper, decade_points(0.0, 0.5 * s, 1e-3 * v), q);
    return lo + hi;
}

double pareto_variance_tail_integral(double eta, double alpha) {
    if (!(eta > 1) || !(alpha > 0 && alpha < 1)) throw DomainError("tail integral requires eta > 1, 0 < alpha < 1");
    // Singular part S(y) = ((1-y)^{1-η} - 1)/(η - 1) integrates in closed form.
    const double singular = (1.0 / (eta - alpha) - 1.0 / (2.0 * eta - alpha - 1.0)) / (eta - 1.0);
    // Remainder in r = -ln(1-y); R grows at most like e^{(η-2) r}.
    const double rate = (2.0 * eta - alpha - 1.0) - std::max(0.0, eta - 2.0);
    const double r_max = 46.0 / rate;
    auto f = [&](double r) { return std::exp(-(2.0 * eta - alpha - 1.0) * r) * g_star_regular(eta, alpha, r); };
    std::vector<double> pts = log_points(0.0, r_max);
    pts.insert(pts.begin() + 1, std::log(2.0));
    QuadratureControl q = tight();
    q.rel_tol = 1e-10;
    return singular + integrate(f, pts, q);
}

DecayLaw pareto_variance_asym(const ModelConfig& cfg) {
    const ParetoDelay& p = require_pareto(cfg);
    require_fractional(cfg);
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, th = p.theta, eta = p.eta;
    const double mu1 = cfg.mu(1), mu2 = cfg.mu(2);
    switch (ParetoRegime::select(ParetoQuantity::Variance, eta, a).branch) {
    case ParetoBranch::EtaBelowAlpha: {
        const double g = gamma_fn(1.0 - eta), h = gamma_fn(a + 1.0 - eta);
        const double c = 2.0 * gamma_fn(a + 1.0 - 2.0 * eta) * g / (gamma_fn(2.0 * a + 1.0 - 2.0 * eta) * h) -
                         g * g / (h * h);
        return {mu1 * mu1 * lam * lam * std::pow(th, 2.0 * eta) * c, 2.0 * (a - eta), 0.0, 0.0};
    }
    case ParetoBranch::EtaAtAlpha: {
        const double g = gamma_fn(1.0 - a), ta = std::pow(th, a);
        return {mu1 * mu1 * lam * lam * ta * ta * g * g + mu2 * lam * ta * g, 0.0, 0.0, 0.0};
    }
    case ParetoBranch::AlphaToOne:
        return {mu2 * lam * std::pow(th, eta) * gamma_fn(1.0 - eta) / gamma_fn(a + 1.0 - eta), a - eta, 0.0, 0.0};
    case ParetoBranch::EtaAtOne:
        return {mu2 * lam * th / gamma_fn(a), a - 1.0, 1.0, 0.0};
    default: {
        const double ga = gamma_fn(a);
        const double I = pareto_variance_tail_integral(eta, a);
        return {2.0 * mu1 * mu1 * lam * lam * std::pow(th, a + 1.0) / (ga * ga) * I + mu2 * lam * th / ((eta - 1.0) * ga),
                a - 1.0, 0.0, 0.0};
    }
    }
}

CovarianceConstants pareto_cov_integrals(const ModelConfig& cfg, double s) {
    const ParetoDelay& p = require_pareto(cfg);
    if (!(s > 0)) throw DomainError("covariance constants require s > 0");
    const double a = cfg.renewal.alpha, th = p.theta, eta = p.eta, half = 0.5 * s;
    QuadratureControl q = tight();
    q.rel_tol = 1e-9;
    CovarianceConstants out;

    // x = u^{1/α} absorbs x^{α-1} near 0; w = s - x resolves E[Z(w)] ~ w^α near x = s.
    auto m_lower = [&](double u) { return pareto_mean_exact(cfg, s - std::pow(u, 1.0 / a)) / a; };
    auto m_upper = [&](double w) { return pareto_mean_exact(cfg, w) * std::pow(s - w, a - 1.0); };
    out.mean_integral = integrate(m_lower, {0.0, std::pow(half, a)}, q) +
                        integrate(m_upper, decade_points(0.0, half, 1e-3 * std::min(1.0, th)), q);

    auto surv = [&](double w) { return std::pow(th / (th + w), eta); };
    const double dens = cfg.renewal.lambda / gamma_fn(a);
    auto s_lower = [&](double x) { return surv(s - x) * std::pow(x, a); };
    auto s_upper = [&](double w) { return surv(w) * std::pow(s - w, a); };
    out.survival_integral = dens * (integrate(s_lower, decade_points(0.0, half, 1e-3 * std::min(1.0, s)), q) +
                                    integrate(s_upper, decade_points(0.0, half, 1e-3 * th), q));
    return out;
}

DecayLaw pareto_cov_asym(const ModelConfig& cfg, double s) {
    const ParetoDelay& p = require_pareto(cfg);
    require_fractional(cfg);
    const double a = cfg.renewal.alpha, lam = cfg.renewal.lambda, th = p.theta, eta = p.eta;
    const double mu1 = cfg.mu(1), mu2 = cfg.mu(2), ga = gamma_fn(a);
    const ParetoBranch b = ParetoRegime::select(ParetoQuantity::Covariance, eta, a).branch;
    const CovarianceConstants k = pareto_cov_integrals(cfg, s);
    const double sa = std::pow(s, a);
    if (b == ParetoBranch::EtaAboveTwoMinusAlpha)
        return {mu1 * mu1 * lam * th * (1.0 - a) / ((eta - 1.0) * ga) * k.survival_integral, a - 2.0, 0.0, 0.0};
    const double e = b == ParetoBranch::EtaAtTwoMinusAlpha ? 2.0 - a : eta;
    double D = mu2 * lam * std::pow(th, e) * sa / gamma_fn(a + 1.0) + mu1 * lam * std::pow(th, e) / ga * k.mean_integral;
    if (b == ParetoBranch::EtaAtTwoMinusAlpha) {
        D += mu1 * mu1 * lam * th / ga * k.survival_integral;
        return {D, a - 2.0, 0.0, 0.0};
    }
    return {D, -eta, 0.0, 0.0};
}

}  // namespace ibnr
