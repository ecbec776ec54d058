#include <doctest.h>

#include "hdet/errors.hpp"
#include "hdet/quadrature.hpp"

#include <cmath>
#include <numeric>

using namespace hdet;

TEST_CASE("gauss_legendre small rules")
{
    const QuadRule& r1 = gauss_legendre(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(2.0));
    const QuadRule& r2 = gauss_legendre(2);
    CHECK(r2.nodes[0] == doctest::Approx(-0.5773502691896258).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(0.5773502691896258).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(gauss_legendre(0), Error);
    CHECK_THROWS_AS(gauss_legendre(513), Error);
}

TEST_CASE("gauss_legendre integrates monomials exactly")
{
    const QuadRule& r = gauss_legendre(16);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 30);
    CHECK(std::abs(s - 2.0 / 31.0) < 1e-13 * 2.0 / 31.0);
    for (int n : {5, 40, 200}) {
        const QuadRule& q = gauss_legendre(n);
        CHECK(std::accumulate(q.weights.begin(), q.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("halfline_grid truncation")
{
    const Grid g = halfline_grid(3.0, 0.0, 1e-14, 40);
    CHECK(std::exp(-3.0 * g.truncation) <= 1e-16);
    CHECK(g.truncation <= 14.0);
    const Grid s = halfline_grid(1.0, -10.0, 1e-14, 40);
    CHECK(s.truncation > halfline_grid(1.0, 0.0, 1e-14, 40).truncation + 9.0);
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) total += g.weights[i] * std::exp(-3.0 * g.nodes[i]);
    CHECK(total == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("unit grids")
{
    const Grid g = unit_grid(1, 2, 1.0);
    CHECK(g.nodes[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g.nodes[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g.weights[0] == doctest::Approx(0.5));
    const Grid p = unit_grid(4, 8, 2.0);
    const double expected[] = {0.0, 1.0 / 16, 0.25, 9.0 / 16, 1.0};
    REQUIRE(p.panels.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(p.panels[k] == doctest::Approx(expected[k]));
}

TEST_CASE("power and log grids integrate x^-1/2")
{
    const Grid p = unit_power_grid(16, 16, 2.0, 8.0);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p.weights[i] / std::sqrt(p.nodes[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    const Grid l = unit_log_grid(-60.0, 20, 1.0);
    double t = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) t += l.weights[i] / std::sqrt(l.nodes[i]);
    CHECK(t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("composite_rule honours breakpoints")
{
    const QuadRule r = composite_rule(-1.0, 2.0, 10, 0.5, {0.0});
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::abs(r.nodes[i]);
    CHECK(s == doctest::Approx(2.5).epsilon(1e-15));
}
