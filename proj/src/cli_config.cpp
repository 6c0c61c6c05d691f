#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ibnr/cli.hpp"
#include "ibnr/errors.hpp"

namespace ibnr::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double get_number(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::vector<double> split_numbers(const std::string& body, const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number in '" + spec + "'");
        }
        if (used != tok.size()) throw ConfigError("cannot parse number in '" + spec + "'");
        out.push_back(v);
    }
    return out;
}

std::pair<std::string, std::vector<double>> split_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("expected <kind>:<parameters>, got '" + spec + "'");
    return {spec.substr(0, colon), split_numbers(spec.substr(colon + 1), spec)};
}

template <class F>
auto as_config_error(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

DelayDistribution delay_from_json(const json& j) {
    if (j.is_string()) return parse_delay_spec(j.get<std::string>());
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw ConfigError("delay must be a spec string or an object with a 'type'");
    const std::string type = j.at("type").get<std::string>();
    return as_config_error([&] {
        if (type == "exponential") {
            reject_unknown(j, {"type", "beta"}, "delay");
            return DelayDistribution::exponential(get_number(j, "beta", "delay"));
        }
        if (type == "pareto") {
            reject_unknown(j, {"type", "theta", "eta"}, "delay");
            return DelayDistribution::pareto(get_number(j, "theta", "delay"), get_number(j, "eta", "delay"));
        }
        throw ConfigError("unknown delay type '" + type + "'");
    });
}

json delay_to_json(const DelayDistribution& d) {
    if (const ExponentialDelay* e = d.as_exponential()) return {{"type", "exponential"}, {"beta", e->beta}};
    if (const ParetoDelay* p = d.as_pareto()) return {{"type", "pareto"}, {"theta", p->theta}, {"eta", p->eta}};
    throw ConfigError("tabulated delays cannot be written to a run configuration");
}

ClaimLaw claim_from_json(const json& j) {
    if (j.is_string()) return parse_claim_spec(j.get<std::string>());
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw ConfigError("claim must be a spec string or an object with a 'type'");
    const std::string type = j.at("type").get<std::string>();
    return as_config_error([&] {
        if (type == "point") {
            reject_unknown(j, {"type", "c"}, "claim");
            return ClaimLaw::point_mass(get_number(j, "c", "claim"));
        }
        if (type == "exponential") {
            reject_unknown(j, {"type", "mean"}, "claim");
            return ClaimLaw::exponential(get_number(j, "mean", "claim"));
        }
        if (type == "pareto") {
            reject_unknown(j, {"type", "theta", "eta"}, "claim");
            return ClaimLaw::pareto(get_number(j, "theta", "claim"), get_number(j, "eta", "claim"));
        }
        if (type == "lognormal") {
            reject_unknown(j, {"type", "mu", "sigma"}, "claim");
            return ClaimLaw::lognormal(get_number(j, "mu", "claim"), get_number(j, "sigma", "claim"));
        }
        throw ConfigError("unknown claim type '" + type + "'");
    });
}

json claim_to_json(const ClaimLaw& c) {
    return std::visit(
        [](const auto& l) -> json {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, PointMassClaim>) return {{"type", "point"}, {"c", l.c}};
            else if constexpr (std::is_same_v<T, ExponentialClaim>) return {{"type", "exponential"}, {"mean", l.mean}};
            else if constexpr (std::is_same_v<T, ParetoClaim>)
                return {{"type", "pareto"}, {"theta", l.theta}, {"eta", l.eta}};
            else return {{"type", "lognormal"}, {"mu", l.mu}, {"sigma", l.sigma}};
        },
        c.law());
}

}  // namespace

RunConfig default_run_config() {
    RunConfig rc;
    rc.model.renewal = {0.6, 1.5};
    rc.model.delta = 0.0;
    rc.model.delay = DelayDistribution::exponential(1.0);
    rc.model.claim_moments = {1.0, 4.0};
    return rc;
}

DelayDistribution parse_delay_spec(const std::string& spec) {
    const auto [kind, p] = split_spec(spec);
    return as_config_error([&, kind = kind, p = p] {
        if ((kind == "exp" || kind == "exponential") && p.size() == 1) return DelayDistribution::exponential(p[0]);
        if (kind == "pareto" && p.size() == 2) return DelayDistribution::pareto(p[0], p[1]);
        throw ConfigError("delay must be exp:<beta> or pareto:<theta>,<eta>, got '" + spec + "'");
    });
}

ClaimLaw parse_claim_spec(const std::string& spec) {
    const auto [kind, p] = split_spec(spec);
    return as_config_error([&, kind = kind, p = p] {
        if (kind == "point" && p.size() == 1) return ClaimLaw::point_mass(p[0]);
        if (kind == "exp" && p.size() == 1) return ClaimLaw::exponential(p[0]);
        if (kind == "pareto" && p.size() == 2) return ClaimLaw::pareto(p[0], p[1]);
        if (kind == "lognormal" && p.size() == 2) return ClaimLaw::lognormal(p[0], p[1]);
        throw ConfigError("claim must be point:<c>, exp:<mean>, pareto:<theta>,<eta> or lognormal:<mu>,<sigma>");
    });
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::string delay_spec(const DelayDistribution& d) {
    if (const ExponentialDelay* e = d.as_exponential()) return "exp:" + shortest(e->beta);
    if (const ParetoDelay* p = d.as_pareto()) return "pareto:" + shortest(p->theta) + "," + shortest(p->eta);
    return d.describe();
}

RunConfig parse_run_config(const json& j, RunConfig rc) {
    reject_unknown(j, {"alpha", "lambda", "delta", "delay", "mu1", "mu2", "claim", "s", "t", "mode", "paths", "seed",
                       "out", "full_precision"},
                   "run configuration");
    auto num = [&](const char* k, double& dst) {
        if (j.contains(k)) dst = get_number(j, k, "config");
    };
    num("alpha", rc.model.renewal.alpha);
    num("lambda", rc.model.renewal.lambda);
    num("delta", rc.model.delta);
    if (j.contains("mu1")) rc.model.claim_moments.at(0) = get_number(j, "mu1", "config");
    if (j.contains("mu2")) {
        rc.model.claim_moments.resize(2);
        rc.model.claim_moments[1] = get_number(j, "mu2", "config");
    }
    if (j.contains("delay")) rc.model.delay = delay_from_json(j.at("delay"));
    if (j.contains("claim")) rc.claim = claim_from_json(j.at("claim"));
    if (j.contains("s")) rc.s = get_number(j, "s", "config");
    if (j.contains("t")) rc.t = get_number(j, "t", "config");
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) throw ConfigError("config.mode must be a string");
        rc.mode = j.at("mode").get<std::string>();
    }
    if (j.contains("paths")) {
        if (!j.at("paths").is_number_integer()) throw ConfigError("config.paths must be an integer");
        rc.paths = j.at("paths").get<long>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) throw ConfigError("config.seed must be an integer");
        rc.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) throw ConfigError("config.out must be a string");
        rc.out = j.at("out").get<std::string>();
    }
    if (j.contains("full_precision")) {
        if (!j.at("full_precision").is_boolean()) throw ConfigError("config.full_precision must be a boolean");
        rc.full_precision = j.at("full_precision").get<bool>();
    }
    as_config_error([&] {
        rc.model.validate();
        return 0;
    });
    return rc;
}

json to_json(const RunConfig& rc) {
    json j;
    j["alpha"] = rc.model.renewal.alpha;
    j["lambda"] = rc.model.renewal.lambda;
    j["delta"] = rc.model.delta;
    j["delay"] = delay_to_json(rc.model.delay);
    j["mu1"] = rc.model.mu(1);
    if (rc.model.max_moment() >= 2) j["mu2"] = rc.model.mu(2);
    if (rc.claim) j["claim"] = claim_to_json(*rc.claim);
    if (rc.s) j["s"] = *rc.s;
    if (rc.t) j["t"] = *rc.t;
    j["mode"] = rc.mode;
    j["paths"] = rc.paths;
    j["seed"] = rc.seed;
    j["out"] = rc.out;
    j["full_precision"] = rc.full_precision;
    return j;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

ClaimLaw effective_claim(const RunConfig& rc) {
    if (rc.claim) return *rc.claim;
    const double m1 = rc.model.mu(1);
    const double m2 = rc.model.max_moment() >= 2 ? rc.model.mu(2) : m1 * m1;
    if (m2 == m1 * m1) return ClaimLaw::point_mass(m1);
    return as_config_error([&] { return ClaimLaw::lognormal_with_moments(m1, m2); });
}

}  // namespace ibnr::cli
