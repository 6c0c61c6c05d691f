#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ibnr/cli.hpp"
#include "ibnr/errors.hpp"
#include "ibnr/expo.hpp"

using namespace ibnr;
using namespace ibnr::cli;

TEST_CASE("strict configuration parsing") {
    const auto j = nlohmann::json::parse(R"({"alpha": 0.7, "delay": "pareto:1,1.4", "t": 10, "mode": "asym"})");
    const RunConfig rc = parse_run_config(j);
    CHECK(rc.model.renewal.alpha == 0.7);
    CHECK(rc.model.renewal.lambda == 1.5);
    REQUIRE(rc.model.delay.as_pareto());
    CHECK(rc.model.delay.as_pareto()->eta == 1.4);
    CHECK(rc.t == 10.0);
    CHECK(rc.mode == "asym");

    const auto typed = nlohmann::json::parse(R"({"delay": {"type": "exponential", "beta": 2}})");
    CHECK(parse_run_config(typed).model.delay.as_exponential()->beta == 2.0);

    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"alpah": 0.7})")), ConfigError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"alpha": "0.7"})")), ConfigError);
}

TEST_CASE("configuration round trip") {
    RunConfig rc = default_run_config();
    rc.model.delay = DelayDistribution::pareto(2.0, 0.4);
    rc.s = 3.0;
    rc.t = 9.0;
    rc.claim = ClaimLaw::lognormal(0.1, 0.5);
    const RunConfig back = parse_run_config(to_json(rc));
    CHECK(back.model.delay.as_pareto()->theta == 2.0);
    CHECK(back.s == 3.0);
    CHECK(back.t == 9.0);
    REQUIRE(back.claim);
    CHECK(std::get<LogNormalClaim>(back.claim->law()).sigma == 0.5);
}

TEST_CASE("spec strings") {
    CHECK(parse_delay_spec("exp:0.5").as_exponential()->beta == 0.5);
    CHECK(delay_spec(parse_delay_spec("pareto:1,1.4")) == "pareto:1,1.4");
    CHECK(std::get<PointMassClaim>(parse_claim_spec("point:2").law()).c == 2.0);
    CHECK_THROWS_AS(parse_delay_spec("weibull:1"), ConfigError);
    CHECK_THROWS_AS(parse_delay_spec("exp:abc"), ConfigError);
    CHECK_THROWS_AS(parse_claim_spec("pareto:1"), ConfigError);
}

TEST_CASE("value queries") {
    RunConfig rc = default_run_config();
    rc.t = 5.0;
    const ValueResult exact = cmd_value("mean", rc);
    CHECK(exact.value == doctest::Approx(expo_mean_exact(rc.model, 5.0)).epsilon(1e-14));
    rc.mode = "quadrature";
    CHECK(cmd_value("mean", rc).value == doctest::Approx(exact.value).epsilon(1e-8));
    rc.mode = "asym";
    rc.t = 1e5;
    const ValueResult asym = cmd_value("var", rc);
    REQUIRE(asym.law);
    CHECK(asym.law->power == doctest::Approx(-0.4));
    rc.mode = "nonsense";
    CHECK_THROWS_AS(cmd_value("mean", rc), ConfigError);
    rc.mode = "exact";
    rc.s.reset();
    CHECK_THROWS_AS(cmd_value("cov", rc), ConfigError);
    CHECK_THROWS_AS(cmd_value("median", rc), ConfigError);
}

TEST_CASE("classification report") {
    RunConfig rc = default_run_config();
    rc.model.delay = DelayDistribution::pareto(1.0, 0.8);
    const std::string out = cmd_classify(rc);
    CHECK(out.find("LRD") != std::string::npos);
    CHECK(out.find("-(eta+alpha)/2") != std::string::npos);
}

TEST_CASE("reproduce targets") {
    CHECK(reproduce_targets().size() == 10);
    const Csv t1 = reproduce("table1");
    CHECK(t1.rows.size() == 20);
    const int col = t1.column("asymptotic");
    REQUIRE(col >= 0);
    CHECK(std::get<double>(t1.rows[0][static_cast<std::size_t>(col)]) == doctest::Approx(0.100726).epsilon(5e-6));
    std::ostringstream os;
    write_csv(t1, os, false);
    CHECK(os.str().rfind("delay,beta_or_eta,theta,asymptotic,exact,source\n", 0) == 0);
    CHECK_THROWS_AS(reproduce("table9"), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1234567891, false) == "0.123457");
    CHECK(format_number(0.1, true) == "0.10000000000000001");
}
