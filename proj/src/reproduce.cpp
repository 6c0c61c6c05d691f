#include <cmath>
#include <cstdio>

#include "ibnr/classify.hpp"
#include "ibnr/cli.hpp"
#include "ibnr/errors.hpp"
#include "ibnr/expo.hpp"
#include "ibnr/pareto.hpp"

namespace ibnr::cli {

namespace {

constexpr double t_table = 1e5;
const double betas[] = {0.1, 0.2, 0.5, 1.0, 2.0};
const double etas[] = {0.2, 0.4, 1.0, 1.2, 1.4};
const double thetas[] = {0.5, 1.0, 2.0};
struct Case {
    int id;
    double s, t;
};
const Case cases[] = {{1, 1e4, 1e5}, {2, 2e4, 1.1e5}};

ModelConfig table_model(double alpha, DelayDistribution d) {
    ModelConfig m;
    m.renewal = {alpha, 1.5};
    m.delay = std::move(d);
    m.claim_moments = {1.0, 4.0};
    return m;
}

ModelConfig expo_model(double beta, double alpha = 0.6) { return table_model(alpha, DelayDistribution::exponential(beta)); }
ModelConfig pareto_model(double theta, double eta, double alpha = 0.6) {
    return table_model(alpha, DelayDistribution::pareto(theta, eta));
}

std::string pareto_source(const char* quantity, ParetoQuantity q, double eta, double alpha) {
    return std::string("pareto.") + quantity + ".asymptotic[" + ParetoRegime::select(q, eta, alpha).to_string() + "]";
}

Csv table1() {
    Csv c{{"delay", "beta_or_eta", "theta", "asymptotic", "exact", "source"}, {}};
    for (double b : betas) {
        const ModelConfig m = expo_model(b);
        c.rows.push_back({std::string("exponential"), b, std::monostate{}, expo_mean_asym(m)(t_table),
                          expo_mean_exact(m, t_table), std::string("expo.mean.power-law / expo.mean.kummer")});
    }
    for (double e : etas)
        for (double th : thetas) {
            const ModelConfig m = pareto_model(th, e);
            c.rows.push_back({std::string("pareto"), e, th, pareto_mean_asym(m)(t_table), pareto_mean_exact(m, t_table),
                              pareto_source("mean", ParetoQuantity::Mean, e, 0.6) + " / pareto.mean.incomplete-beta"});
        }
    return c;
}

Csv table2() {
    Csv c{{"delay", "beta_or_eta", "theta", "asymptotic", "exact", "source"}, {}};
    for (double b : betas) {
        const ModelConfig m = expo_model(b);
        c.rows.push_back({std::string("exponential"), b, std::monostate{}, expo_variance_asym(m)(t_table),
                          expo_variance_exact(m, t_table), std::string("expo.variance.power-law / expo.variance.an-series")});
    }
    for (double e : etas)
        for (double th : thetas) {
            const ModelConfig m = pareto_model(th, e);
            c.rows.push_back({std::string("pareto"), e, th, pareto_variance_asym(m)(t_table), std::monostate{},
                              pareto_source("variance", ParetoQuantity::Variance, e, 0.6)});
        }
    return c;
}

Csv table34(bool correlation) {
    Csv c{{"delay", "beta_or_eta", "theta", "case", "s", "t", correlation ? "correlation" : "covariance", "source"}, {}};
    for (double b : betas) {
        const ModelConfig m = expo_model(b);
        for (const Case& k : cases) {
            const double v = correlation ? correlation_decay(m, k.s)(k.t) : expo_cov_asym(m, k.s)(k.t);
            c.rows.push_back({std::string("exponential"), b, std::monostate{}, double(k.id), k.s, k.t, v,
                              std::string(correlation ? "expo.correlation.power-law" : "expo.covariance.power-law")});
        }
    }
    for (double e : etas)
        for (double th : thetas) {
            const ModelConfig m = pareto_model(th, e);
            for (const Case& k : cases) {
                const double v = correlation ? correlation_decay(m, k.s)(k.t) : pareto_cov_asym(m, k.s)(k.t);
                c.rows.push_back({std::string("pareto"), e, th, double(k.id), k.s, k.t, v,
                                  correlation ? pareto_source("correlation", ParetoQuantity::Correlation, e, 0.6)
                                              : pareto_source("covariance", ParetoQuantity::Covariance, e, 0.6)});
            }
        }
    return c;
}

// α grid k/100 on (0.1, 0.9) plus points straddling each branch boundary
// that falls inside the sweep.
std::vector<double> alpha_grid(double eta) {
    std::vector<double> g;
    for (int k = 10; k <= 90; ++k) g.push_back(k / 100.0);
    for (double b : {eta, 2.0 - eta, 3.0 - 2.0 * eta})
        if (b > 0.1 && b < 0.9) {
            g.push_back(b - 1e-6);
            g.push_back(b + 1e-6);
        }
    std::sort(g.begin(), g.end());
    return g;
}

Csv alpha_figure(int which) {
    static const char* names[] = {"mean", "variance", "covariance", "correlation"};
    Csv c{{"alpha", names[which - 1], "series"}, {}};
    constexpr double s = 1e4;
    for (double e : {0.4, 1.0, 1.4}) {
        char series[32];
        std::snprintf(series, sizeof series, "eta=%.1f", e);
        for (double a : alpha_grid(e)) {
            const ModelConfig m = pareto_model(1.0, e, a);
            double v = 0;
            switch (which) {
            case 1: v = pareto_mean_asym(m)(t_table); break;
            case 2: v = pareto_variance_asym(m)(t_table); break;
            case 3: v = pareto_cov_asym(m, s)(t_table); break;
            default: v = correlation_decay(m, s)(t_table); break;
            }
            c.rows.push_back({a, v, std::string(series)});
        }
    }
    return c;
}

Csv fig5() {
    Csv c{{"t", "correlation", "series"}, {}};
    constexpr double s = 1e4;
    for (const char* kind : {"exponential", "pareto"})
        for (double a : {0.3, 0.5, 0.8}) {
            const ModelConfig m = kind[0] == 'e' ? expo_model(1.0, a) : pareto_model(1.0, 1.0, a);
            const DecayLaw law = correlation_decay(m, s);
            char series[48];
            std::snprintf(series, sizeof series, "%s alpha=%.1f", kind, a);
            for (int k = 0; k <= 50; ++k) {
                const double t = 1e5 + k * 2e3;
                c.rows.push_back({t, law(t), std::string(series)});
            }
        }
    return c;
}

Csv fig6() {
    Csv c{{"delta", "value", "series"}, {}};
    for (const char* q : {"mean", "variance"})
        for (double t : {20.0, 50.0, 100.0, 200.0}) {
            char series[48];
            std::snprintf(series, sizeof series, "%s t=%g", q, t);
            for (int k = 0; k <= 50; ++k) {
                ModelConfig m = expo_model(1.0);
                m.delta = k * 0.002;
                const double v = q[0] == 'm' ? expo_mean_exact(m, t) : expo_variance_exact(m, t);
                c.rows.push_back({m.delta, v, std::string(series)});
            }
        }
    return c;
}

}  // namespace

int Csv::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

const std::vector<std::string>& reproduce_targets() {
    static const std::vector<std::string> t{"table1", "table2", "table3", "table4", "fig1",
                                            "fig2",   "fig3",   "fig4",   "fig5",   "fig6"};
    return t;
}

Csv reproduce(const std::string& target) {
    if (target == "table1") return table1();
    if (target == "table2") return table2();
    if (target == "table3") return table34(false);
    if (target == "table4") return table34(true);
    if (target.size() == 4 && target.rfind("fig", 0) == 0) {
        const int k = target[3] - '0';
        if (k >= 1 && k <= 4) return alpha_figure(k);
        if (k == 5) return fig5();
        if (k == 6) return fig6();
    }
    throw ConfigError("unknown reproduction target '" + target + "'");
}

std::string format_number(double v, bool full_precision) {
    char buf[40];
    std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.6g", v);
    return buf;
}

void write_csv(const Csv& csv, std::ostream& os, bool full_precision) {
    for (std::size_t i = 0; i < csv.header.size(); ++i) os << (i ? "," : "") << csv.header[i];
    os << '\n';
    for (const auto& row : csv.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&row[i])) os << format_number(*d, full_precision);
            else if (const std::string* s = std::get_if<std::string>(&row[i])) {
                if (s->find_first_of(",\"") != std::string::npos) {
                    os << '"';
                    for (char ch : *s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
                    os << '"';
                } else {
                    os << *s;
                }
            }
        }
        os << '\n';
    }
}

}  // namespace ibnr::cli
