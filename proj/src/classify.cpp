#include "ibnr/classify.hpp"

#include <algorithm>
#include <cmath>

#include "ibnr/errors.hpp"
#include "ibnr/expo.hpp"
#include "ibnr/pareto.hpp"

namespace ibnr {

namespace {

bool near(double a, double b) { return std::abs(a - b) < pareto_boundary_tol; }

// Poisson arrivals, δ = 0: Var[Z(t)] = λμ₂∫_0^t W̄ and Cov = λμ₂∫_0^s W̄(t-s+v) dv.
DecayLaw poisson_correlation(const ModelConfig& cfg, double s) {
    if (cfg.delta != 0.0) throw DomainError("Poisson correlation laws are given for delta = 0 only");
    const double lam = cfg.renewal.lambda, mu2 = cfg.mu(2);
    if (const ExponentialDelay* e = cfg.delay.as_exponential()) {
        const double b = e->beta;
        const double var_s = lam * mu2 * -std::expm1(-b * s) / b;
        const double cov_c = lam * mu2 * std::exp(b * s) * -std::expm1(-b * s) / b;
        return {cov_c / std::sqrt(var_s * lam * mu2 / b), 0.0, 0.0, b};
    }
    const ParetoDelay& p = *cfg.delay.as_pareto();
    const double th = p.theta, eta = p.eta;
    const double var_s = near(eta, 1.0) ? lam * mu2 * th * std::log1p(s / th)
                                        : lam * mu2 * std::pow(th, eta) *
                                              (std::pow(th + s, 1.0 - eta) - std::pow(th, 1.0 - eta)) / (1.0 - eta);
    const DecayLaw cov{lam * mu2 * s * std::pow(th, eta), -eta, 0.0, 0.0};
    DecayLaw var_t;
    if (near(eta, 1.0)) var_t = {lam * mu2 * th, 0.0, 1.0, 0.0};
    else if (eta < 1.0) var_t = {lam * mu2 * std::pow(th, eta) / (1.0 - eta), 1.0 - eta, 0.0, 0.0};
    else var_t = {lam * mu2 * th / (eta - 1.0), 0.0, 0.0, 0.0};
    return divide_by_sqrt(cov, var_s, var_t);
}

}  // namespace

const char* to_string(Dependence d) { return d == Dependence::LRD ? "LRD" : "SRD"; }

DecayLaw correlation_decay(const ModelConfig& cfg, double s) {
    cfg.validate();
    if (!(s > 1)) throw DomainError("correlation_decay requires s > 1");
    if (cfg.delay.as_custom()) throw DomainError("analytic correlation laws exist for exponential and Pareto delays only");
    if (cfg.renewal.is_poisson()) return poisson_correlation(cfg, s);
    if (cfg.delay.as_exponential()) {
        const DecayLaw var = expo_variance_asym(cfg);
        return divide_by_sqrt(expo_cov_asym(cfg, s), var(s), var);
    }
    const DecayLaw var = pareto_variance_asym(cfg);
    return divide_by_sqrt(pareto_cov_asym(cfg, s), var(s), var);
}

bool integrable(const DecayLaw& law) {
    if (law.exp_rate < 0) throw DomainError("integrability is defined for non-growing exponentials");
    if (law.exp_rate > 0) return true;
    const double d = -law.power;
    if (d > 1) return true;
    if (d < 1) return false;
    return law.log_power < -1.0;
}

DependenceClass classify(const DecayLaw& decay, Definition def) {
    DependenceClass out{Dependence::SRD, IntegralCriterion{true}, decay, false};
    // The power-law test only speaks to pure powers with d in (0, 2).
    const double d = -decay.power;
    const bool covered = decay.exp_rate == 0.0 && decay.log_power == 0.0 && d > 0 && d < 2;
    if (def == Definition::PowerLaw && covered) {
        out.criterion = PowerLawCriterion{d};
        out.kind = d <= 1.0 ? Dependence::LRD : Dependence::SRD;
        return out;
    }
    out.power_law_inapplicable = def == Definition::PowerLaw;
    const bool finite = integrable(decay);
    out.criterion = IntegralCriterion{finite};
    out.kind = finite ? Dependence::SRD : Dependence::LRD;
    return out;
}

TableCell table_cell(const ModelConfig& cfg) {
    cfg.validate();
    const double a = cfg.renewal.alpha;
    if (cfg.delay.as_exponential()) {
        if (cfg.renewal.is_poisson()) return {"exponential, alpha = 1", "exp(-beta t)", Dependence::SRD};
        return {"exponential", "-(3-alpha)/2", Dependence::SRD};
    }
    const ParetoDelay* p = cfg.delay.as_pareto();
    if (!p) throw DomainError("no summary-table cell for custom delays");
    const double eta = p->eta;
    if (cfg.renewal.is_poisson()) {
        if (near(eta, 1.0)) return {"eta = 1", "-1, (ln t)^{-1/2}", Dependence::LRD};
        if (eta < 1.0) return {"0 < eta < 1", "-(eta+1)/2", Dependence::LRD};
        return {"eta > 1", "-eta", Dependence::SRD};
    }
    switch (ParetoRegime::select(ParetoQuantity::Correlation, eta, a).branch) {
    case ParetoBranch::EtaBelowAlpha: return {"0 < eta < alpha", "-alpha", Dependence::LRD};
    case ParetoBranch::AlphaToOne: return {"alpha <= eta < 1", "-(eta+alpha)/2", Dependence::LRD};
    case ParetoBranch::EtaAtOne: return {"eta = 1", "-(1+alpha)/2, (ln t)^{-1/2}", Dependence::LRD};
    case ParetoBranch::OneToMidpoint:
        return {"1 < eta <= (3-alpha)/2", "-eta-(alpha-1)/2", Dependence::LRD};
    case ParetoBranch::MidpointToTwoMinusAlpha:
        return {"(3-alpha)/2 < eta < 2-alpha", "-eta-(alpha-1)/2", Dependence::SRD};
    default: return {"eta >= 2-alpha", "-(3-alpha)/2", Dependence::SRD};
    }
}

PowerFit empirical_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 5) throw DomainError("empirical_exponent needs at least 5 samples");
    double tmin = samples.front().first, tmax = tmin;
    for (const auto& [t, c] : samples) {
        if (!(t > 0) || !(c > 0)) throw DomainError("empirical_exponent needs positive t and correlation");
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (tmax < 100.0 * tmin) throw DomainError("empirical_exponent needs samples spanning two decades");
    const double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0;
    for (const auto& [t, c] : samples) {
        sx += std::log(t);
        sy += std::log(c);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [t, c] : samples) {
        const double dx = std::log(t) - mx, dy = std::log(c) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    PowerFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

}  // namespace ibnr
