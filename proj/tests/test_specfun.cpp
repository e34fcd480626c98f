#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "soblab/quadrature.hpp"
#include "soblab/specfun.hpp"

using namespace soblab;

TEST_CASE("log_gamma matches the C library implementation") {
    for (double x = 0.05; x < 120.0; x += 0.173) {
        const double ref = std::lgamma(x);
        CHECK(specfun::log_gamma(x) ==
              doctest::Approx(ref).epsilon(1e-13).scale(std::max(1.0, std::abs(ref))));
    }
    CHECK(std::exp(specfun::log_gamma(0.5)) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(std::exp(specfun::log_gamma(5.0)) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(specfun::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("log_gamma recursion invariant") {
    for (double x = 0.1; x <= 100.0; x += 0.37) {
        const double ratio = std::exp(specfun::log_gamma(x + 1.0) - specfun::log_gamma(x));
        CHECK(ratio == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("log_gamma rejects nonpositive arguments") {
    CHECK_THROWS_AS(specfun::log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(specfun::log_gamma(-3.2), std::domain_error);
}

TEST_CASE("unit ball volumes") {
    CHECK(specfun::unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(specfun::unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(specfun::unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
    for (int d = 3; d <= 50; ++d) {
        const double recursion = specfun::unit_ball_volume(d - 2) * 2.0 * M_PI / d;
        CHECK(specfun::unit_ball_volume(d) == doctest::Approx(recursion).epsilon(1e-12));
    }
    CHECK_THROWS_AS(specfun::unit_ball_volume(0), std::domain_error);
}

TEST_CASE("radial integral closed form: elementary cases") {
    CHECK(specfun::radial_integral_closed({1.0, 2.0, 0.0, 1.0}) ==
          doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    CHECK(specfun::radial_integral_closed({1.0, 2.0, 1.0, 2.0}) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("radial integral closed form vs quadrature") {
    const specfun::RadialIntegralParams params(2.0, 3.0, 0.5, 1.7);
    const double closed = specfun::radial_integral_closed(params);
    const double quad = quadrature::integrate_1d(
                            [](double r) {
                                return std::pow(2.0 + std::pow(r, 3.0), -1.7) * std::sqrt(r);
                            },
                            0.0, quadrature::kInf, 1e-12)
                            .value;
    CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("radial integral parameter validation") {
    CHECK_THROWS_AS(specfun::RadialIntegralParams(0.0, 2.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::RadialIntegralParams(1.0, 1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::RadialIntegralParams(1.0, 2.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(specfun::RadialIntegralParams(1.0, 2.0, 1.0, 0.9), std::domain_error);
}
