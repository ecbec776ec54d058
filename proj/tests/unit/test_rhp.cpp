#include <doctest.h>

#include "hdet/rhp.hpp"

#include <cmath>

using namespace hdet;

TEST_CASE("green functions")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    for (cplx z : {cplx(0.0, 1.0), cplx(1.5, 0.5), cplx(-2.0, 2.0)})
        CHECK(std::abs(green_y(l, z, 0.0).y1 - 1.0 / (3.0 - cplx(0, 1) * z)) < 1e-12);
    CHECK(std::abs(green_y(make_zero(Flavor::additive), {0.0, 1.0}, 0.3).y1) == 0.0);
}

TEST_CASE("zero kernel gives the identity")
{
    const KernelSpec z = make_zero(Flavor::additive);
    const Grid grid = default_grid(make_builtin("gaussian"), 0.0);
    CHECK((assemble_X(z, 0.0, {0.3, 1.0}, grid).X - Matrix2c::Identity()).norm() == 0.0);
    CHECK(jump_defect(z, 0.0, 1.0, {1e-2, 5e-3}, grid) == 0.0);
    CHECK(x1_coefficient(z, 0.0, {20.0, 40.0}, grid).norm() == 0.0);
}

TEST_CASE("gaussian riemann-hilbert solution")
{
    const KernelSpec g = make_builtin("gaussian");
    const Grid grid = default_grid(g, 0.0);
    CHECK(std::abs(assemble_X(g, 0.0, {0.0, 3.0}, grid).X.determinant() - 1.0) <= 1e-8);
    CHECK(jump_defect(g, 0.0, 1.0, {1e-2, 5e-3, 2.5e-3}, grid) <= 1e-6);
    const Matrix2c fit = x1_coefficient(g, 0.0, {20.0, 40.0, 80.0}, grid);
    CHECK(std::abs(fit.trace()) <= 1e-6);
    const EdgeSample e = edge_sample(g, 0.0, 1.0, 0, grid);
    Matrix2c expected;
    expected << cplx(0, -e.p[0]), e.q_star[0], e.q[0], cplx(0, e.p_star[0]);
    const auto remainder = [&](double r) {
        const cplx z{0.0, r};
        return (z * (assemble_X(g, 0.0, z, grid).X - Matrix2c::Identity()) - expected).norm();
    };
    const double r40 = remainder(40.0), r80 = remainder(80.0);
    CHECK(r40 <= 1e-2);
    CHECK(r40 / r80 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(remainder(320.0) <= 1e-3);
}

TEST_CASE("bessel riemann-hilbert solution")
{
    const Grid grid = unit_power_grid(16, 16, 2.0, 8.0);
    const KernelSpec b0 = make_builtin("bessel", {{"alpha", 0.0}});
    const Matrix2c fit = x1_coefficient(b0, 1.0, {20.0, 40.0, 80.0}, grid);
    const double q0 = edge_sample(b0, 1.0, 1.0, 0, grid).q[0];
    CHECK(std::abs(fit(1, 0) + q0) <= 1e-5);
    const KernelSpec b1 = make_builtin("bessel", {{"alpha", 1.0}});
    CHECK(jump_defect(b1, 1.0, 1.0, {4e-3, 2e-3, 1e-3}, grid) <= 1e-6);
    CHECK(std::abs(contour_point(Flavor::multiplicative, 1.0) - cplx(0.5, 1.0)) == 0.0);
}
