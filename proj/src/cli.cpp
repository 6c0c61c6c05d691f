#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ibnr/classify.hpp"
#include "ibnr/cli.hpp"
#include "ibnr/engine.hpp"
#include "ibnr/errors.hpp"
#include "ibnr/expo.hpp"
#include "ibnr/pareto.hpp"

namespace ibnr::cli {

namespace {

enum class Query { Mean, Var, Cov, Corr };

Query parse_query(const std::string& q) {
    if (q == "mean") return Query::Mean;
    if (q == "var") return Query::Var;
    if (q == "cov") return Query::Cov;
    if (q == "corr") return Query::Corr;
    throw ConfigError("query must be mean, var, cov or corr");
}

double need_t(const RunConfig& rc) {
    if (!rc.t) throw ConfigError("this query needs --t");
    return *rc.t;
}

double need_s(const RunConfig& rc) {
    if (!rc.s) throw ConfigError("this query needs --s");
    if (rc.t && *rc.s > *rc.t) throw ConfigError("expected s <= t");
    return *rc.s;
}

[[noreturn]] void unsupported(const std::string& why) { throw ConfigError(why); }

ValueResult value_exact(Query q, const RunConfig& rc) {
    const ModelConfig& m = rc.model;
    const double t = need_t(rc);
    if (m.delay.as_pareto()) {
        if (q != Query::Mean)
            unsupported("no closed form for Pareto variance or covariance; use --mode quadrature");
        return {pareto_mean_exact(m, t), "pareto.mean.incomplete-beta", {}, {}};
    }
    if (!m.delay.as_exponential()) unsupported("exact mode needs an exponential or Pareto delay; use --mode quadrature");
    switch (q) {
    case Query::Mean: return {expo_mean_exact(m, t), "expo.mean.kummer", {}, {}};
    case Query::Var: return {expo_variance_exact(m, t), "expo.variance.an-series", {}, {}};
    case Query::Cov: return {expo_cov_exact(m, need_s(rc), t), "expo.covariance.w-series", {}, {}};
    case Query::Corr: {
        const double s = need_s(rc);
        const double c = expo_cov_exact(m, s, t);
        return {c / std::sqrt(expo_variance_exact(m, s) * expo_variance_exact(m, t)), "expo.correlation.closed-form", {}, {}};
    }
    }
    return {};
}

ValueResult value_quadrature(Query q, const RunConfig& rc) {
    const Engine e(rc.model);
    const double t = need_t(rc);
    switch (q) {
    case Query::Mean: return {e.mean(t), "engine.mean.quadrature", {}, {}};
    case Query::Var: return {e.variance(t), "engine.variance.quadrature", {}, {}};
    case Query::Cov: return {e.covariance(need_s(rc), t), "engine.covariance.quadrature", {}, {}};
    case Query::Corr: return {e.correlation(need_s(rc), t), "engine.correlation.quadrature", {}, {}};
    }
    return {};
}

ValueResult value_asym(Query q, const RunConfig& rc) {
    const ModelConfig& m = rc.model;
    const double t = need_t(rc);
    if (!(t > 1)) throw ConfigError("asymptotic laws are evaluated for t > 1");
    const bool expo = m.delay.as_exponential() != nullptr;
    if (!expo && !m.delay.as_pareto()) unsupported("asymptotic laws need an exponential or Pareto delay");
    if (q == Query::Corr) {
        const DecayLaw law = correlation_decay(m, need_s(rc));
        return {law(t), expo ? "expo.correlation.power-law" : "pareto.correlation.power-law", law, {}};
    }
    if (m.renewal.is_poisson()) unsupported("asymptotic mean, variance and covariance laws need alpha < 1");
    DecayLaw law;
    std::string src;
    if (expo) {
        switch (q) {
        case Query::Mean: law = expo_mean_asym(m); src = "expo.mean.power-law"; break;
        case Query::Var: law = expo_variance_asym(m); src = "expo.variance.power-law"; break;
        default: law = expo_cov_asym(m, need_s(rc)); src = "expo.covariance.power-law"; break;
        }
    } else {
        const double eta = m.delay.as_pareto()->eta, a = m.renewal.alpha;
        ParetoQuantity pq = ParetoQuantity::Mean;
        switch (q) {
        case Query::Mean: law = pareto_mean_asym(m); break;
        case Query::Var: law = pareto_variance_asym(m); pq = ParetoQuantity::Variance; break;
        default: law = pareto_cov_asym(m, need_s(rc)); pq = ParetoQuantity::Covariance; break;
        }
        src = "pareto.asymptotic[" + ParetoRegime::select(pq, eta, a).to_string() + "]";
    }
    return {law(t), src, law, {}};
}

ValueResult value_mc(Query q, const RunConfig& rc) {
    const double t = need_t(rc);
    Target g;
    g.t = t;
    switch (q) {
    case Query::Mean: g.kind = TargetKind::Mean; break;
    case Query::Var: g.kind = TargetKind::Variance; break;
    case Query::Cov: g.kind = TargetKind::Covariance; g.s = need_s(rc); break;
    case Query::Corr: g.kind = TargetKind::Correlation; g.s = need_s(rc); break;
    }
    SimulationOptions o;
    o.n_paths = rc.paths;
    o.seed = rc.seed;
    const Estimate e = estimate(rc.model, effective_claim(rc), {g}, o).front();
    return {e.value, "montecarlo.common-path", {}, e};
}

}  // namespace

ValueResult cmd_value(const std::string& query, const RunConfig& rc) {
    const Query q = parse_query(query);
    try {
        if (rc.mode == "exact") return value_exact(q, rc);
        if (rc.mode == "quadrature") return value_quadrature(q, rc);
        if (rc.mode == "asym") return value_asym(q, rc);
        if (rc.mode == "mc") return value_mc(q, rc);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("mode must be exact, quadrature, asym or mc");
}

std::string format_value(const std::string& query, const RunConfig& rc, const ValueResult& v) {
    std::ostringstream os;
    os << "query: " << query << "\nmode: " << rc.mode << "\n";
    if (rc.s) os << "s: " << format_number(*rc.s, rc.full_precision) << "\n";
    if (rc.t) os << "t: " << format_number(*rc.t, rc.full_precision) << "\n";
    os << "value: " << format_number(v.value, rc.full_precision) << "\n";
    if (v.estimate) {
        os << "std_error: " << format_number(v.estimate->std_error, rc.full_precision) << "\n";
        os << "paths: " << v.estimate->n_paths << "\n";
        if (!v.estimate->reliable) os << "warning: claim law lacks the moments this standard error needs\n";
    }
    os << "source: " << v.source << "\n";
    if (v.law) os << "law: " << v.law->to_string() << "\n";
    return os.str();
}

std::string cmd_classify(const RunConfig& rc) {
    const double s = rc.s.value_or(10.0);
    DecayLaw law;
    TableCell cell;
    try {
        law = correlation_decay(rc.model, s);
        cell = table_cell(rc.model);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const DependenceClass d1 = classify(law, Definition::PowerLaw);
    const DependenceClass d2 = classify(law, Definition::Integral);
    std::ostringstream os;
    os << "delay: " << delay_spec(rc.model.delay) << "\nalpha: " << rc.model.renewal.alpha << "\n";
    os << "correlation law (s = " << s << "): " << law.to_string() << "\n";
    if (d1.power_law_inapplicable) os << "power-law test: not applicable\n";
    else os << "power-law test: " << to_string(d1.kind) << " (d = " << std::get<PowerLawCriterion>(d1.criterion).d << ")\n";
    os << "integral test: " << to_string(d2.kind) << " ("
       << (std::get<IntegralCriterion>(d2.criterion).integrable ? "integrable" : "not integrable") << ")\n";
    os << "table cell: " << cell.region << "\n";
    os << "summary: " << to_string(d2.kind) << ", Corr ∝ ";
    if (law.exp_rate > 0) {
        os << "exp(-" << format_number(law.exp_rate, false) << " t)";
    } else {
        os << "t^{" << cell.exponent << "} = t^{" << format_number(law.power, false) << "}";
        if (law.log_power != 0) os << " (ln t)^{" << format_number(law.log_power, false) << "}";
    }
    os << "\n";
    if (d2.kind != cell.verdict) os << "warning: table verdict " << to_string(cell.verdict) << " differs\n";
    return os.str();
}

SimulationReport cmd_simulate(const RunConfig& rc) {
    const double t = need_t(rc);
    std::vector<Target> targets{{TargetKind::Mean, 0, t}, {TargetKind::Variance, 0, t}};
    SimulationReport r{{"mean(t)", "var(t)"}, {}};
    if (rc.s) {
        const double s = need_s(rc);
        targets.push_back({TargetKind::Mean, 0, s});
        targets.push_back({TargetKind::Variance, 0, s});
        targets.push_back({TargetKind::Covariance, s, t});
        targets.push_back({TargetKind::Correlation, s, t});
        r.names.insert(r.names.end(), {"mean(s)", "var(s)", "cov(s,t)", "corr(s,t)"});
    }
    SimulationOptions o;
    o.n_paths = rc.paths;
    o.seed = rc.seed;
    try {
        r.estimates = estimate(rc.model, effective_claim(rc), targets, o);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return r;
}

int run(int argc, char** argv) {
    CLI::App app{"Moments, asymptotics and simulation of discounted IBNR claims under fractional Poisson arrivals"};
    app.require_subcommand(1);

    struct Flags {
        std::string config;
        std::optional<double> alpha, lambda, delta, mu1, mu2, s, t;
        std::optional<std::string> delay, claim, mode, out;
        std::optional<long> paths;
        std::optional<std::uint64_t> seed;
        bool full = false;
    } f;
    std::string query, target;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration");
        sub->add_option("--alpha", f.alpha, "fractional Poisson index in (0, 1]");
        sub->add_option("--lambda", f.lambda, "fractional Poisson rate");
        sub->add_option("--delta", f.delta, "force of interest");
        sub->add_option("--delay", f.delay, "exp:<beta> or pareto:<theta>,<eta>");
        sub->add_option("--mu1", f.mu1, "first claim moment");
        sub->add_option("--mu2", f.mu2, "second claim moment");
        sub->add_option("--s", f.s, "earlier time");
        sub->add_option("--t", f.t, "later time");
        sub->add_option("--mode", f.mode, "exact | quadrature | asym | mc");
        sub->add_option("--paths", f.paths, "Monte Carlo paths");
        sub->add_option("--seed", f.seed, "Monte Carlo seed");
        sub->add_option("--claim", f.claim, "claim law for simulation: point:<c> | exp:<mean> | pareto:<theta>,<eta> | lognormal:<mu>,<sigma>");
        sub->add_option("--out", f.out, "output file (stdout when absent)");
        sub->add_flag("--full-precision", f.full, "print 17 significant figures");
    };
    CLI::App* value = app.add_subcommand("value", "one mean, variance, covariance or correlation");
    value->add_option("query", query, "mean | var | cov | corr")->required();
    common(value);
    CLI::App* repro = app.add_subcommand("reproduce", "CSV data for a table or figure");
    repro->add_option("target", target, "table1..table4 | fig1..fig6")->required();
    common(repro);
    CLI::App* cls = app.add_subcommand("classify", "long/short-range dependence verdicts");
    common(cls);
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimates at s and t");
    common(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig rc = f.config.empty() ? default_run_config() : load_run_config(f.config);
        if (f.alpha) rc.model.renewal.alpha = *f.alpha;
        if (f.lambda) rc.model.renewal.lambda = *f.lambda;
        if (f.delta) rc.model.delta = *f.delta;
        if (f.delay) rc.model.delay = parse_delay_spec(*f.delay);
        if (f.mu1) rc.model.claim_moments.at(0) = *f.mu1;
        if (f.mu2) {
            rc.model.claim_moments.resize(2);
            rc.model.claim_moments[1] = *f.mu2;
        }
        if (f.claim) rc.claim = parse_claim_spec(*f.claim);
        if (f.s) rc.s = *f.s;
        if (f.t) rc.t = *f.t;
        if (f.mode) rc.mode = *f.mode;
        if (f.paths) rc.paths = *f.paths;
        if (f.seed) rc.seed = *f.seed;
        if (f.out) rc.out = *f.out;
        if (f.full) rc.full_precision = true;
        try {
            rc.model.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }

        std::ofstream file;
        if (!rc.out.empty()) {
            file.open(rc.out);
            if (!file) throw ConfigError("cannot write '" + rc.out + "'");
        }
        std::ostream& os = rc.out.empty() ? std::cout : file;

        if (*value) {
            os << format_value(query, rc, cmd_value(query, rc));
        } else if (*repro) {
            Csv csv;
            try {
                csv = reproduce(target);
            } catch (const DomainError& e) {
                throw ConfigError(e.what());
            }
            write_csv(csv, os, rc.full_precision);
        } else if (*cls) {
            os << cmd_classify(rc);
        } else {
            const SimulationReport r = cmd_simulate(rc);
            os << "quantity,value,std_error,paths,reliable\n";
            for (std::size_t i = 0; i < r.names.size(); ++i) {
                const Estimate& e = r.estimates[i];
                os << r.names[i] << ',' << format_number(e.value, rc.full_precision) << ','
                   << format_number(e.std_error, rc.full_precision) << ',' << e.n_paths << ','
                   << (e.reliable ? "yes" : "no") << '\n';
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const RangeError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace ibnr::cli
