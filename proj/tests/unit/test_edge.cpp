#include <doctest.h>

#include "hdet/fredholm.hpp"
#include "hdet/specfun.hpp"

#include <cmath>
#include <random>

using namespace hdet;

TEST_CASE("edge functions boundary behaviour")
{
    const KernelSpec a = make_builtin("airy");
    CHECK(edge_sample(a, 6.0, 1.0, 0, default_grid(a, 6.0)).q[0] / airy_ai(6.0).ai == doctest::Approx(1.0).epsilon(1e-4));
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    CHECK(edge_sample(b, 1e-4, 1.0, 0, default_grid(b, 1e-4)).q[0] == doctest::Approx(0.5).epsilon(1e-3));
    const EdgeSample z = edge_sample(make_zero(Flavor::additive), 0.0, 1.0, 2, default_grid(a, 0.0));
    for (int n = 0; n <= 2; ++n) {
        CHECK(z.q[n] == 0.0);
        CHECK(z.p[n] == 0.0);
    }
}

TEST_CASE("hastings-mcleod value from the determinant")
{
    // Literature value of the Hastings-McLeod solution at 0.
    const KernelSpec a = make_builtin("airy");
    CHECK(std::abs(edge_sample(a, 0.0, 1.0, 0, default_grid(a, 0.0)).q[0] - 0.36706155154807) < 1e-12);
}

TEST_CASE("bessel alpha zero edge function is constant")
{
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    for (double t : {0.01, 0.5, 3.0}) CHECK(std::abs(edge_sample(b, t, 1.0, 0, default_grid(b, t)).q[0] - 0.5) < 1e-13);
}

TEST_CASE("symmetric kernels give equal starred functions")
{
    const KernelSpec g = make_builtin("gaussian");
    const EdgeSample e = edge_sample(g, 0.3, 0.6, 2, default_grid(g, 0.3));
    for (int n = 0; n <= 2; ++n) {
        CHECK(e.q[n] == doctest::Approx(e.q_star[n]).epsilon(1e-13));
        CHECK(e.p[n] == doctest::Approx(e.p_star[n]).epsilon(1e-13));
    }
}

TEST_CASE("zakharov-shabat residuals")
{
    const KernelSpec g = make_builtin("gaussian");
    CHECK(zs_residual(g, edge_functions(g, {-1.0, 0.0, 1.0}, 1.0, 1), 1e-3).max() <= 1e-4);
    const KernelSpec b = make_builtin("bessel", {{"alpha", 1.0}});
    CHECK(zs_residual(b, edge_functions(b, {0.5, 1.0, 2.0}, 1.0, 1), 1e-3).max() <= 1e-4);
    const KernelSpec z = make_zero(Flavor::additive);
    CHECK(zs_residual(z, edge_functions(z, {0.0, 1.0}, 1.0, 1), 1e-3).max() == 0.0);
}

TEST_CASE("conserved quantity I0")
{
    std::vector<double> tg, tb;
    for (int i = 0; i <= 8; ++i) tg.push_back(-1.0 + 0.25 * i);
    for (int i = 0; i <= 6; ++i) tb.push_back(0.5 + 0.25 * i);
    const EdgeFunctions eg = edge_functions(make_builtin("gaussian"), tg, 1.0, 1);
    const InvariantSeries ig = conserved_invariant(eg, 0);
    CHECK(ig.drift <= 1e-6);
    CHECK(ig.values[0] == doctest::Approx(2 * eg.p[1][0] + eg.q[0][0] * eg.q[0][0] - eg.p[0][0] * eg.p[0][0]));
    CHECK(conserved_invariant(edge_functions(make_builtin("bessel", {{"alpha", 1.0}}), tb, 1.0, 1), 0).drift <= 1e-6);
    const EdgeFunctions ez = edge_functions(make_zero(Flavor::additive), tg, 1.0, 1);
    for (double v : conserved_invariant(ez, 0).values) CHECK(v == 0.0);
}

TEST_CASE("resolvent symmetry")
{
    const KernelSpec g = make_builtin("gaussian");
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    CHECK(resolvent_symmetry_defect(g, 0.0, 0.7, 0.7, 1.0) == 0.0);
    CHECK(resolvent_symmetry_defect(g, 0.0, 0.3, 1.1, 1.0) <= 1e-9);
    CHECK(resolvent_symmetry_defect(b, 1.0, 0.25, 0.75, 1.0) <= 1e-9);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < 5; ++i) CHECK(resolvent_symmetry_defect(b, 2.0, u(rng), u(rng), 0.5) <= 1e-9);
}

TEST_CASE("finite differences")
{
    const auto f = [](double x) { return std::sin(x); };
    CHECK(fd_derivative(f, 0.4, 1e-3) == doctest::Approx(std::cos(0.4)).epsilon(1e-11));
    CHECK(fd_second(f, 0.4, 1e-3) == doctest::Approx(-std::sin(0.4)).epsilon(1e-7));
}
