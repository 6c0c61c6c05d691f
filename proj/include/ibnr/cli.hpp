#pragma once

// Front end shared by the command-line tool and the tests: run configuration,
// single-value queries, classification reports and table/figure data.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ibnr/decay_law.hpp"
#include "ibnr/model.hpp"
#include "ibnr/montecarlo.hpp"

namespace ibnr::cli {

struct RunConfig {
    ModelConfig model;
    std::optional<ClaimLaw> claim;  // Monte Carlo only; lognormal from mu1, mu2 when absent
    std::optional<double> s, t;
    std::string mode = "exact";
    long paths = 100000;
    std::uint64_t seed = 1;
    std::string out;
    bool full_precision = false;
};

// alpha 0.6, lambda 1.5, delta 0, exp:1 delay, mu1 1, mu2 4.
RunConfig default_run_config();

// Strict: unknown keys and wrong types raise ConfigError. Missing keys keep
// the values already in base.
RunConfig parse_run_config(const nlohmann::json& j, RunConfig base = default_run_config());
nlohmann::json to_json(const RunConfig& rc);
RunConfig load_run_config(const std::string& path);

DelayDistribution parse_delay_spec(const std::string& spec);  // exp:<beta> | pareto:<theta>,<eta>
ClaimLaw parse_claim_spec(const std::string& spec);           // point:<c> | exp:<mean> | pareto:<theta>,<eta> | lognormal:<mu>,<sigma>
std::string delay_spec(const DelayDistribution& d);

ClaimLaw effective_claim(const RunConfig& rc);

struct ValueResult {
    double value = 0.0;
    std::string source;             // formula identifier
    std::optional<DecayLaw> law;    // asymptotic mode
    std::optional<Estimate> estimate;  // Monte Carlo mode
};

// query: mean | var | cov | corr; mode: exact | quadrature | asym | mc.
ValueResult cmd_value(const std::string& query, const RunConfig& rc);
std::string format_value(const std::string& query, const RunConfig& rc, const ValueResult& v);

std::string cmd_classify(const RunConfig& rc);

struct SimulationReport {
    std::vector<std::string> names;
    std::vector<Estimate> estimates;
};
SimulationReport cmd_simulate(const RunConfig& rc);

using Cell = std::variant<std::monostate, double, std::string>;

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

// table1..table4, fig1..fig6.
const std::vector<std::string>& reproduce_targets();
Csv reproduce(const std::string& target);
void write_csv(const Csv& csv, std::ostream& os, bool full_precision);

// 6 significant figures, or 17 with full precision.
std::string format_number(double v, bool full_precision);

// Entry point of the executable. Exit codes: 0 ok, 2 configuration, 3 numerical.
int run(int argc, char** argv);

}  // namespace ibnr::cli
