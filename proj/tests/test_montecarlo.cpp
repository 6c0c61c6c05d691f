#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ibnr/engine.hpp"
#include "ibnr/errors.hpp"
#include "ibnr/montecarlo.hpp"

using namespace ibnr;

TEST_CASE("Philox known-answer vectors") {
    const PhiloxBlock zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(zero == PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const std::uint32_t f = 0xffffffffu;
    const PhiloxBlock ones = philox4x32_10({f, f, f, f}, {f, f});
    CHECK(ones == PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("streams are reproducible and distinct") {
    PhiloxStream a(7, 3), b(7, 3), c(7, 4);
    for (int k = 0; k < 10; ++k) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    PhiloxStream u(1, 0);
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double v = u.uniform();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("claim laws") {
    const ClaimLaw p = ClaimLaw::pareto(2.0, 3.0);
    CHECK(p.moment(1) == doctest::Approx(1.0));
    CHECK(std::isinf(p.moment(3)));
    CHECK(p.finite_moments() == 2);
    const ClaimLaw ln = ClaimLaw::lognormal_with_moments(1.0, 4.0);
    CHECK(ln.moment(1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ln.moment(2) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(ln.finite_moments() == 8);
    CHECK(ClaimLaw::point_mass(2.0).moment(3) == doctest::Approx(8.0));
    CHECK(ClaimLaw::exponential(2.0).moment(2) == doctest::Approx(8.0));

    ModelConfig cfg;
    cfg.claim_moments = {1.0, 4.0};
    CHECK_NOTHROW(ln.check_against(cfg));
    CHECK_THROWS_AS(ClaimLaw::point_mass(1.0).check_against(cfg), DomainError);
    CHECK_THROWS_AS(ClaimLaw::pareto(1.0, -2.0), DomainError);
}

TEST_CASE("evaluating Z on a fixed path") {
    SimulationPath path;
    path.arrivals = {0.5, 1.0, 2.0};
    path.delays = {1.0, 3.0, 0.1};
    path.claims = {1.0, 2.0, 4.0};
    path.horizon = 5.0;
    CHECK(evaluate_z(path, 1.2, 0.0) == doctest::Approx(3.0));
    CHECK(evaluate_z(path, 2.05, 0.0) == doctest::Approx(6.0));
    CHECK(evaluate_z(path, 2.2, 0.0) == doctest::Approx(2.0));
    CHECK(evaluate_z(path, 1.2, 0.1) == doctest::Approx(std::exp(-0.15) + 2.0 * std::exp(-0.4)));
    const std::vector<double> many = evaluate_z(path, {2.2, 1.2, 2.05}, 0.0);
    CHECK(many[0] == doctest::Approx(2.0));
    CHECK(many[1] == doctest::Approx(3.0));
    CHECK(many[2] == doctest::Approx(6.0));
}

TEST_CASE("estimates do not depend on the thread count") {
    ModelConfig cfg;
    cfg.renewal = {0.6, 1.0};
    cfg.claim_moments = {1.0, 1.0};
    const std::vector<Target> targets{{TargetKind::Mean, 0, 5}, {TargetKind::Covariance, 2, 5}};
    SimulationOptions one{4000, 11, 1};
    SimulationOptions four{4000, 11, 4};
    const auto a = estimate(cfg, ClaimLaw::point_mass(1.0), targets, one);
    const auto b = estimate(cfg, ClaimLaw::point_mass(1.0), targets, four);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].value == b[k].value);
        CHECK(a[k].std_error == b[k].std_error);
    }
}

TEST_CASE("simulation agrees with quadrature") {
    ModelConfig cfg;
    cfg.renewal = {0.6, 1.0};
    cfg.claim_moments = {1.0, 1.0};
    const std::vector<Target> targets{{TargetKind::Mean, 0, 5}, {TargetKind::Variance, 0, 5},
                                      {TargetKind::Correlation, 2, 5}};
    const auto est = estimate(cfg, ClaimLaw::point_mass(1.0), targets, SimulationOptions{20000, 3});
    const Engine eng(cfg);
    CHECK(std::abs(est[0].value - eng.mean(5)) < 4 * est[0].std_error);
    CHECK(std::abs(est[1].value - eng.variance(5)) < 4 * est[1].std_error);
    CHECK(std::abs(est[2].value - eng.correlation(2, 5)) < 4 * est[2].std_error);
}

TEST_CASE("unreliable standard errors are flagged") {
    ModelConfig cfg;
    cfg.renewal = {0.6, 1.0};
    cfg.claim_moments = {0.5, 1.0};
    const auto est = estimate(cfg, ClaimLaw::pareto(1.0, 3.0), {{TargetKind::Variance, 0, 3}},
                              SimulationOptions{500, 1});
    CHECK_FALSE(est[0].reliable);
}

TEST_CASE("event counts") {
    const RenewalModel m{0.6, 1.0};
    const Estimate e = estimate_count(m, 10.0, SimulationOptions{20000, 5});
    CHECK(std::abs(e.value - renewal_function(m, 10.0)) < 4 * e.std_error);
}
