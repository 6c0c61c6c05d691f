#include <doctest.h>

#include <cmath>

#include "ibnr/errors.hpp"
#include "ibnr/quadrature.hpp"
#include "ibnr/renewal.hpp"
#include "ibnr/specfun.hpp"

using namespace ibnr;

TEST_CASE("renewal function and density") {
    const RenewalModel m{0.6, 1.5};
    const double t = 7.0;
    CHECK(renewal_function(m, t) == doctest::Approx(1.5 * std::pow(t, 0.6) / gamma_fn(1.6)).epsilon(1e-14));
    CHECK(renewal_density(m, t) == doctest::Approx(1.5 * std::pow(t, -0.4) / gamma_fn(0.6)).epsilon(1e-14));
    // m(t) = ∫ m'
    auto dens = [&](double u) { return renewal_density(m, std::pow(u, 1.0 / 0.6)) * std::pow(u, 1.0 / 0.6 - 1.0) / 0.6; };
    CHECK(integrate(dens, {0.0, std::pow(t, 0.6)}) == doctest::Approx(renewal_function(m, t)).epsilon(1e-9));
    CHECK(renewal_function(m, 0.0) == 0.0);
    CHECK_THROWS_AS(renewal_density(m, 0.0), DomainError);
}

TEST_CASE("count variance of the fractional Poisson process") {
    const RenewalModel m{0.6, 1.5};
    const double t = 3.0, x = 1.5 * std::pow(t, 0.6);
    const double want = x / gamma_fn(1.6) + x * x * (2.0 / gamma_fn(2.2) - 1.0 / std::pow(gamma_fn(1.6), 2));
    CHECK(count_variance(m, t) == doctest::Approx(want).epsilon(1e-13));
    const RenewalModel p{1.0, 2.0};
    CHECK(count_variance(p, 4.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("interarrival survival") {
    CHECK(interarrival_survival({0.6, 1.0}, std::pow(5.0, 1.0 / 0.6)) ==
          doctest::Approx(0.0951178464387546167).epsilon(1e-10));
    CHECK(interarrival_survival({1.0, 2.0}, 0.7) == doctest::Approx(std::exp(-1.4)).epsilon(1e-14));
    CHECK(interarrival_survival({0.6, 1.0}, 0.0) == 1.0);
}

TEST_CASE("renewal model validation") {
    CHECK_THROWS_AS((RenewalModel{0.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((RenewalModel{1.5, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((RenewalModel{0.5, -1.0}.validate()), DomainError);
    CHECK_NOTHROW((RenewalModel{1.0, 1.0}.validate()));
    CHECK((RenewalModel{1.0, 3.0}.is_poisson()));
}
