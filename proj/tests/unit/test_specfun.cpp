#include <doctest.h>

#include "hdet/errors.hpp"
#include "hdet/specfun.hpp"

#include <cmath>

using namespace hdet;

TEST_CASE("log_gamma at integers")
{
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-14);
}

TEST_CASE("log_gamma against high-precision values")
{
    // mpmath.loggamma, 30 digits
    const struct {
        cplx z, expected;
    } cases[] = {
        {{0.5, 3.0}, {-3.79345045043622317, 0.309819271086439166}},
        {{0.3, 2.0}, {-2.35944935593757102, -0.916907613518669756}},
        {{5.0, -7.0}, {-1.04510808012078477, -12.3338069914749754}},
        {{-2.5, 0.5}, {-0.935085621298277479, -8.87096288524745920}},
    };
    for (const auto& c : cases) CHECK(std::abs(log_gamma(c.z) - c.expected) < 1e-12);
}

TEST_CASE("log_gamma rejects poles")
{
    CHECK_THROWS_AS(log_gamma(-2.0), Error);
    CHECK_THROWS_AS(log_gamma(0.0), Error);
}

TEST_CASE("log_gamma reflection property")
{
    for (double y : {0.5, 1.5, 4.0}) {
        const cplx z{0.3, y};
        const cplx lhs = std::exp(log_gamma(z) + log_gamma(1.0 - z));
        CHECK(std::abs(lhs - M_PI / std::sin(M_PI * z)) < 1e-11 * std::abs(lhs));
    }
}

TEST_CASE("airy values")
{
    CHECK(airy_ai(0.0).ai == doctest::Approx(0.355028053887817239).epsilon(1e-14));
    CHECK(airy_ai(0.0).ai_prime == doctest::Approx(-0.258819403792806798).epsilon(1e-14));
    CHECK(airy_ai(6.0).ai == doctest::Approx(9.94769436025288957e-06).epsilon(1e-12));
    CHECK(airy_ai(-3.0).ai == doctest::Approx(-0.378814293677658074).epsilon(1e-13));
    CHECK(airy_ai(-3.0).ai_prime == doctest::Approx(0.314583769216598814).epsilon(1e-13));
    CHECK_THROWS_AS(airy_ai(60.0), Error);
}

TEST_CASE("airy satisfies its ODE")
{
    const double h = 1e-3;
    for (double x : {-2.0, 0.0, 2.0}) {
        const double d2 = (airy_ai(x + h).ai - 2 * airy_ai(x).ai + airy_ai(x - h).ai) / (h * h);
        CHECK(std::abs(d2 - x * airy_ai(x).ai) < 1e-6);
        const double d1 = (airy_ai(x + h).ai_prime - airy_ai(x - h).ai_prime) / (2 * h);
        CHECK(std::abs(d1 - x * airy_ai(x).ai) < 1e-6);
    }
}

TEST_CASE("bessel values")
{
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(1.0, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(0.5, 2.0) - std::sqrt(2.0 / (M_PI * 2.0)) * std::sin(2.0)) < 1e-12);
    CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.765197686557966551).epsilon(1e-14));
    CHECK(bessel_j(2.5, 3.7) == doctest::Approx(0.456851884112953362).epsilon(1e-13));
    CHECK(bessel_j_prime(1.0, 2.0) == doctest::Approx(-0.0644716247372010255).epsilon(1e-12));
}
