#include "ibnr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <queue>
#include <thread>

#include "ibnr/errors.hpp"

namespace ibnr {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

// Fixed-shape pairwise sum so the result depends only on the input order.
double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

double mean_of(const std::vector<double>& x) { return pairwise_sum(x) / static_cast<double>(x.size()); }

Estimate mean_estimate(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double m = mean_of(x);
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - m) * (x[i] - m);
    const double var = pairwise_sum(d) / (n - 1.0);
    return {m, std::sqrt(var / n), static_cast<long>(x.size()), true};
}

// Unbiased sample covariance; the SE is that of the mean of centred products.
Estimate covariance_estimate(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = mean_of(x), my = mean_of(y);
    std::vector<double> p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = (x[i] - mx) * (y[i] - my);
    const double cov = pairwise_sum(p) / (n - 1.0);
    const double pm = pairwise_sum(p) / n;
    for (double& v : p) v = (v - pm) * (v - pm);
    const double se = std::sqrt(pairwise_sum(p) / (n - 1.0) / n);
    return {cov, se, static_cast<long>(x.size()), true};
}

double sample_correlation(const double* x, const double* y, std::size_t n) {
    std::vector<double> a(x, x + n), b(y, y + n);
    const double mx = mean_of(a), my = mean_of(b);
    std::vector<double> xy(n), xx(n), yy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xy[i] = (x[i] - mx) * (y[i] - my);
        xx[i] = (x[i] - mx) * (x[i] - mx);
        yy[i] = (y[i] - my) * (y[i] - my);
    }
    const double den = std::sqrt(pairwise_sum(xx) * pairwise_sum(yy));
    return den > 0 ? pairwise_sum(xy) / den : 0.0;
}

}  // namespace

ClaimLaw::ClaimLaw(Law law) : law_(law) {
    std::visit(overloaded{
                   [](const PointMassClaim& c) {
                       if (!(c.c >= 0) || !std::isfinite(c.c)) throw DomainError("point-mass claim needs c >= 0");
                   },
                   [](const ExponentialClaim& c) {
                       if (!(c.mean > 0) || !std::isfinite(c.mean)) throw DomainError("exponential claim needs mean > 0");
                   },
                   [](const ParetoClaim& c) {
                       if (!(c.theta > 0) || !(c.eta > 0)) throw DomainError("Pareto claim needs theta, eta > 0");
                   },
                   [](const LogNormalClaim& c) {
                       if (!std::isfinite(c.mu) || !(c.sigma >= 0)) throw DomainError("lognormal claim needs sigma >= 0");
                   },
               },
               law_);
}

ClaimLaw ClaimLaw::lognormal_with_moments(double mu1, double mu2) {
    if (!(mu1 > 0) || !(mu2 >= mu1 * mu1)) throw DomainError("lognormal moments need mu1 > 0, mu2 >= mu1^2");
    const double s2 = std::log(mu2 / (mu1 * mu1));
    return lognormal(std::log(mu1) - 0.5 * s2, std::sqrt(s2));
}

double ClaimLaw::moment(int k) const {
    if (k < 0) throw DomainError("moment order must be >= 0");
    if (k == 0) return 1.0;
    return std::visit(overloaded{
                          [&](const PointMassClaim& c) { return std::pow(c.c, k); },
                          [&](const ExponentialClaim& c) { return std::tgamma(k + 1.0) * std::pow(c.mean, k); },
                          [&](const ParetoClaim& c) {
                              if (c.eta <= k) return std::numeric_limits<double>::infinity();
                              // k! θ^k / ((η-1)...(η-k))
                              double v = std::tgamma(k + 1.0) * std::pow(c.theta, k);
                              for (int j = 1; j <= k; ++j) v /= c.eta - j;
                              return v;
                          },
                          [&](const LogNormalClaim& c) { return std::exp(k * c.mu + 0.5 * k * k * c.sigma * c.sigma); },
                      },
                      law_);
}

int ClaimLaw::finite_moments() const {
    int k = 0;
    while (k < 8 && std::isfinite(moment(k + 1))) ++k;
    return k;
}

double ClaimLaw::sample(PhiloxStream& rng) const {
    return std::visit(overloaded{
                          [&](const PointMassClaim& c) { return c.c; },
                          [&](const ExponentialClaim& c) { return -c.mean * std::log(rng.uniform()); },
                          [&](const ParetoClaim& c) { return c.theta * std::expm1(-std::log(rng.uniform()) / c.eta); },
                          [&](const LogNormalClaim& c) { return std::exp(c.mu + c.sigma * rng.normal()); },
                      },
                      law_);
}

void ClaimLaw::check_against(const ModelConfig& cfg) const {
    for (int k = 1; k <= cfg.max_moment(); ++k) {
        const double a = moment(k), b = cfg.mu(k);
        if (!(std::abs(a - b) <= 1e-12 * std::abs(b)))
            throw DomainError("claim law moment " + std::to_string(k) + " = " + std::to_string(a) +
                              " does not match the configured " + std::to_string(b));
    }
}

double sample_interarrival(const RenewalModel& model, PhiloxStream& rng) {
    const double a = model.alpha, lam = model.lambda;
    const double u = rng.uniform();
    if (model.is_poisson()) return -std::log(u) / lam;
    const double v = rng.uniform();
    // τ = λ^{-1/α} |ln U| (sin(απ(1-V)) / sin(απV))^{1/α}.
    const double q = std::sin(a * M_PI * (1.0 - v)) / std::sin(a * M_PI * v);
    return std::pow(lam, -1.0 / a) * -std::log(u) * std::pow(q, 1.0 / a);
}

double sample_delay(const DelayDistribution& delay, PhiloxStream& rng) {
    if (const ExponentialDelay* e = delay.as_exponential()) return -std::log(rng.uniform()) / e->beta;
    if (const ParetoDelay* p = delay.as_pareto()) return p->theta * std::expm1(-std::log(rng.uniform()) / p->eta);
    return delay.quantile_survival(rng.uniform());
}

SimulationPath sample_path(const ModelConfig& cfg, const ClaimLaw& claim, double horizon, PhiloxStream& rng) {
    if (!(horizon > 0)) throw DomainError("sample_path requires horizon > 0");
    SimulationPath p;
    p.horizon = horizon;
    double t = sample_interarrival(cfg.renewal, rng);
    while (t <= horizon) {
        if (p.arrivals.size() >= max_path_events) throw NumericalError("simulated path exceeds 1e7 events");
        p.arrivals.push_back(t);
        p.delays.push_back(sample_delay(cfg.delay, rng));
        p.claims.push_back(claim.sample(rng));
        t += sample_interarrival(cfg.renewal, rng);
    }
    return p;
}

double evaluate_z(const SimulationPath& path, double t, double delta) {
    if (t > path.horizon) throw DomainError("evaluate_z requires t <= horizon");
    double z = 0.0;
    for (std::size_t i = 0; i < path.arrivals.size() && path.arrivals[i] <= t; ++i) {
        const double report = path.arrivals[i] + path.delays[i];
        if (t < report) z += std::exp(-delta * report) * path.claims[i];
    }
    return z;
}

std::vector<double> evaluate_z(const SimulationPath& path, const std::vector<double>& ts, double delta) {
    std::vector<std::size_t> order(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (ts[k] > path.horizon) throw DomainError("evaluate_z requires t <= horizon");
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
    // Min-heap of reporting times of claims already incurred; each horizon
    // admits new arrivals and retires reported claims.
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    std::vector<double> out(ts.size());
    std::size_t next = 0;
    for (std::size_t k : order) {
        const double t = ts[k];
        while (next < path.arrivals.size() && path.arrivals[next] <= t) {
            open.push({path.arrivals[next] + path.delays[next], next});
            ++next;
        }
        while (!open.empty() && open.top().first <= t) open.pop();
        // Sum the survivors in arrival order so the result matches the direct sum.
        std::vector<std::size_t> idx;
        idx.reserve(open.size());
        auto copy = open;
        while (!copy.empty()) {
            idx.push_back(copy.top().second);
            copy.pop();
        }
        std::sort(idx.begin(), idx.end());
        double z = 0.0;
        for (std::size_t i : idx) z += std::exp(-delta * (path.arrivals[i] + path.delays[i])) * path.claims[i];
        out[k] = z;
    }
    return out;
}

int resolve_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IBNR_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

namespace {

// Runs body(i) for i in [0, n) on the worker pool; each index is independent.
void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (threads <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const long chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                const long lo = w * chunk, hi = std::min(n, lo + chunk);
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<Estimate> estimate(const ModelConfig& cfg, const ClaimLaw& claim, const std::vector<Target>& targets,
                               const SimulationOptions& opt) {
    cfg.validate();
    claim.check_against(cfg);
    if (opt.n_paths < 100) throw DomainError("estimate requires at least 100 paths");
    if (targets.empty()) return {};

    // Distinct evaluation times shared by all targets.
    std::vector<double> times;
    for (const Target& g : targets) {
        if (!(g.t > 0)) throw DomainError("target times must be positive");
        const bool two = g.kind == TargetKind::Covariance || g.kind == TargetKind::Correlation ||
                         g.kind == TargetKind::JointMoment;
        if (two) {
            if (!(g.s > 0)) throw DomainError("target times must be positive");
            if (g.s > g.t) throw DomainError("target requires s <= t");
            times.push_back(g.s);
        }
        if (g.kind == TargetKind::JointMoment && (g.n < 0 || g.m < 0)) throw DomainError("joint moment orders must be >= 0");
        times.push_back(g.t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const double horizon = times.back();
    auto slot = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), x) - times.begin());
    };

    const long n = opt.n_paths;
    std::vector<std::vector<double>> z(times.size(), std::vector<double>(static_cast<std::size_t>(n)));
    parallel_for(n, resolve_threads(opt.threads), [&](long i) {
        PhiloxStream rng(opt.seed, static_cast<std::uint64_t>(i));
        const SimulationPath path = sample_path(cfg, claim, horizon, rng);
        const std::vector<double> v = evaluate_z(path, times, cfg.delta);
        for (std::size_t k = 0; k < times.size(); ++k) z[k][static_cast<std::size_t>(i)] = v[k];
    });

    const int finite = claim.finite_moments();
    std::vector<Estimate> out;
    for (const Target& g : targets) {
        const std::vector<double>& zt = z[slot(g.t)];
        Estimate e;
        switch (g.kind) {
        case TargetKind::Mean:
            e = mean_estimate(zt);
            e.reliable = finite >= 2;
            break;
        case TargetKind::Variance:
            e = covariance_estimate(zt, zt);
            e.reliable = finite >= 4;
            break;
        case TargetKind::Covariance:
            e = covariance_estimate(z[slot(g.s)], zt);
            e.reliable = finite >= 4;
            break;
        case TargetKind::JointMoment: {
            const std::vector<double>& zs = z[slot(g.s)];
            std::vector<double> p(zs.size());
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(zs[i], g.n) * std::pow(zt[i], g.m);
            e = mean_estimate(p);
            e.reliable = finite >= 2 * (g.n + g.m);
            break;
        }
        case TargetKind::Correlation: {
            const std::vector<double>& zs = z[slot(g.s)];
            const int b = std::max(2, opt.correlation_batches);
            const std::size_t per = static_cast<std::size_t>(n) / static_cast<std::size_t>(b);
            if (per < 2) throw DomainError("too few paths per correlation batch");
            std::vector<double> r(static_cast<std::size_t>(b));
            for (int k = 0; k < b; ++k)
                r[static_cast<std::size_t>(k)] =
                    sample_correlation(zs.data() + k * per, zt.data() + k * per, per);
            const Estimate batch = mean_estimate(r);
            e.value = sample_correlation(zs.data(), zt.data(), zs.size());
            e.std_error = batch.std_error;
            e.n_paths = n;
            e.reliable = finite >= 4;
            break;
        }
        }
        out.push_back(e);
    }
    return out;
}

Estimate estimate_count(const RenewalModel& model, double t, const SimulationOptions& opt) {
    model.validate();
    if (!(t > 0)) throw DomainError("estimate_count requires t > 0");
    if (opt.n_paths < 100) throw DomainError("estimate_count requires at least 100 paths");
    std::vector<double> c(static_cast<std::size_t>(opt.n_paths));
    parallel_for(opt.n_paths, resolve_threads(opt.threads), [&](long i) {
        PhiloxStream rng(opt.seed, static_cast<std::uint64_t>(i));
        long k = 0;
        for (double s = sample_interarrival(model, rng); s <= t; s += sample_interarrival(model, rng)) {
            if (static_cast<std::size_t>(++k) > max_path_events) throw NumericalError("count exceeds 1e7 events");
        }
        c[static_cast<std::size_t>(i)] = static_cast<double>(k);
    });
    return mean_estimate(c);
}

}  // namespace ibnr
