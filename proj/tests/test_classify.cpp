#include <doctest.h>

#include <cmath>

#include "ibnr/classify.hpp"
#include "ibnr/errors.hpp"

using namespace ibnr;

namespace {

ModelConfig make(double alpha, DelayDistribution d) {
    ModelConfig c;
    c.renewal = {alpha, 1.5};
    c.delay = d;
    c.claim_moments = {1.0, 4.0};
    return c;
}

}  // namespace

TEST_CASE("integrability of decay laws") {
    CHECK(integrable(DecayLaw{1.0, -1.5, 0.0, 0.0}));
    CHECK_FALSE(integrable(DecayLaw{1.0, -0.5, 0.0, 0.0}));
    CHECK_FALSE(integrable(DecayLaw{1.0, -1.0, 0.0, 0.0}));
    CHECK_FALSE(integrable(DecayLaw{1.0, -1.0, -0.5, 0.0}));
    CHECK(integrable(DecayLaw{1.0, -1.0, -1.5, 0.0}));
    CHECK(integrable(DecayLaw{1.0, 3.0, 0.0, 0.1}));
    CHECK_THROWS_AS(integrable(DecayLaw{1.0, -2.0, 0.0, -0.1}), DomainError);
}

TEST_CASE("power-law and integral tests") {
    const DependenceClass lrd = classify(DecayLaw{1.0, -0.6, 0.0, 0.0}, Definition::PowerLaw);
    CHECK(lrd.kind == Dependence::LRD);
    REQUIRE(std::holds_alternative<PowerLawCriterion>(lrd.criterion));
    CHECK(std::get<PowerLawCriterion>(lrd.criterion).d == doctest::Approx(0.6));

    CHECK(classify(DecayLaw{1.0, -1.2, 0.0, 0.0}, Definition::PowerLaw).kind == Dependence::SRD);
    CHECK(classify(DecayLaw{1.0, -1.2, 0.0, 0.0}, Definition::Integral).kind == Dependence::SRD);

    // a log factor or an exponential rate makes the power-law test inapplicable
    const DependenceClass logged = classify(DecayLaw{1.0, -0.8, -0.5, 0.0}, Definition::PowerLaw);
    CHECK(logged.power_law_inapplicable);
    CHECK(logged.kind == Dependence::LRD);
    const DependenceClass expo = classify(DecayLaw{1.0, 0.0, 0.0, 1.0}, Definition::PowerLaw);
    CHECK(expo.power_law_inapplicable);
    CHECK(expo.kind == Dependence::SRD);
}

TEST_CASE("summary cells for Pareto delays") {
    const double alpha = 0.6;
    struct Row {
        double eta;
        Dependence verdict;
        double exponent;
    };
    const Row rows[] = {
        {0.3, Dependence::LRD, -alpha},
        {0.8, Dependence::LRD, -(0.8 + alpha) / 2},
        {1.0, Dependence::LRD, -(1 + alpha) / 2},
        {1.1, Dependence::LRD, -1.1 - (alpha - 1) / 2},
        {1.3, Dependence::SRD, -1.3 - (alpha - 1) / 2},
        {1.6, Dependence::SRD, -(3 - alpha) / 2},
    };
    for (const Row& r : rows) {
        CAPTURE(r.eta);
        const ModelConfig cfg = make(alpha, DelayDistribution::pareto(1.0, r.eta));
        const DecayLaw law = correlation_decay(cfg, 1e4);
        CHECK(law.power == doctest::Approx(r.exponent));
        CHECK(classify(law, Definition::Integral).kind == r.verdict);
        CHECK(table_cell(cfg).verdict == r.verdict);
    }
    const DecayLaw at_one = correlation_decay(make(alpha, DelayDistribution::pareto(1.0, 1.0)), 1e4);
    CHECK(at_one.log_power == doctest::Approx(-0.5));
}

TEST_CASE("exponential delays are short-range dependent") {
    const ModelConfig cfg = make(0.6, DelayDistribution::exponential(1.0));
    const DecayLaw law = correlation_decay(cfg, 100.0);
    CHECK(law.power == doctest::Approx(-1.2));
    CHECK(classify(law, Definition::PowerLaw).kind == Dependence::SRD);
    CHECK(table_cell(cfg).exponent == "-(3-alpha)/2");
}

TEST_CASE("Poisson arrivals") {
    const DecayLaw e = correlation_decay(make(1.0, DelayDistribution::exponential(2.0)), 10.0);
    CHECK(e.exp_rate == doctest::Approx(2.0));
    CHECK(classify(e, Definition::Integral).kind == Dependence::SRD);

    const DecayLaw low = correlation_decay(make(1.0, DelayDistribution::pareto(1.0, 0.5)), 10.0);
    CHECK(low.power == doctest::Approx(-0.75));
    CHECK(classify(low, Definition::PowerLaw).kind == Dependence::LRD);

    const DecayLaw one = correlation_decay(make(1.0, DelayDistribution::pareto(1.0, 1.0)), 10.0);
    CHECK(one.power == doctest::Approx(-1.0));
    CHECK(one.log_power == doctest::Approx(-0.5));
    CHECK(classify(one, Definition::Integral).kind == Dependence::LRD);

    const DecayLaw high = correlation_decay(make(1.0, DelayDistribution::pareto(1.0, 3.0)), 10.0);
    CHECK(high.power == doctest::Approx(-3.0));
    const DependenceClass c = classify(high, Definition::PowerLaw);
    CHECK(c.kind == Dependence::SRD);
    CHECK(c.power_law_inapplicable);
}

TEST_CASE("correlation law input checks") {
    const ModelConfig cfg = make(0.6, DelayDistribution::exponential(1.0));
    CHECK_THROWS_AS(correlation_decay(cfg, 0.5), DomainError);
}

TEST_CASE("empirical exponent") {
    std::vector<std::pair<double, double>> samples;
    for (double t = 10.0; t <= 1e4; t *= 3.0) samples.push_back({t, 2.5 * std::pow(t, -1.3)});
    const PowerFit fit = empirical_exponent(samples);
    CHECK(fit.slope == doctest::Approx(-1.3).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    samples.resize(3);
    CHECK_THROWS_AS(empirical_exponent(samples), DomainError);
    CHECK_THROWS_AS(empirical_exponent({{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}), DomainError);
}
