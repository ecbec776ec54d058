#include <doctest.h>

#include "hdet/errors.hpp"
#include "hdet/fredholm.hpp"

#include <cmath>
#include <random>

using namespace hdet;

// Independent Nystrom values: numpy Gauss-Legendre on [0, 12] with 160 nodes for the gaussian
// Hankel square, and the classical Airy and Bessel kernels in their integrable form.
TEST_CASE("gaussian determinants against an independent Nystrom solve")
{
    const KernelSpec g = make_builtin("gaussian");
    const struct {
        double t, gamma, logF, logGp, logGm;
    } rows[] = {
        {0.0, 1.0, -0.082826171025573631, -0.29909004097359332, 0.2162638699480203},
        {-1.0, 1.0, -0.49183952548353665, -0.80151872111964739, 0.30967919563611018},
        {1.0, 0.5, -0.00084718231291090913, -0.028238616790614859, 0.027391434477703886},
        {0.0, 0.25, -0.020089274268976956, -0.13596951963277101, 0.11588024536379442},
    };
    for (const auto& r : rows) {
        const DiscreteOperator op = discretize(g, r.t, default_grid(g, r.t));
        CHECK(std::abs(log_det(op, r.gamma) - r.logF) < 1e-13);
        CHECK(std::abs(log_det_hankel(op, +1, std::sqrt(r.gamma)) - r.logGp) < 1e-13);
        CHECK(std::abs(log_det_hankel(op, -1, std::sqrt(r.gamma)) - r.logGm) < 1e-13);
    }
}

TEST_CASE("airy determinant is the GUE edge distribution")
{
    const KernelSpec a = make_builtin("airy");
    const std::pair<double, double> rows[] = {
        {-2.0, -0.88376511530914259}, {0.0, -0.03110598530631313}, {1.0, -0.0024976784541430449}};
    for (auto [t, expected] : rows) CHECK(std::abs(log_fredholm(a, t, 1.0) - expected) < 1e-13);
}

TEST_CASE("bessel determinant is the hard-edge distribution")
{
    const struct {
        double alpha, t, expected;
    } rows[] = {
        {1.0, 2.0, -0.051422447411851112},
        {1.0, 0.5, -0.0037023217606698311},
        {2.5, 3.0, -0.0020848657436047914},
    };
    for (const auto& r : rows)
        CHECK(std::abs(log_fredholm(make_builtin("bessel", {{"alpha", r.alpha}}), r.t, 1.0) - r.expected) < 1e-13);
    const KernelSpec b0 = make_builtin("bessel", {{"alpha", 0.0}});
    for (double t : {0.1, 1.0, 2.0, 5.0}) CHECK(std::abs(log_fredholm(b0, t, 1.0) + t / 4) < 1e-13);
}

TEST_CASE("log_det trivial cases")
{
    const KernelSpec g = make_builtin("gaussian");
    const DiscreteOperator op = discretize(g, 0.0, default_grid(g, 0.0));
    CHECK(log_det(op, 0.0) == 0.0);
    const DiscreteOperator zero = discretize(make_zero(Flavor::additive), 0.0, default_grid(g, 0.0));
    CHECK(log_det(zero, 1.0) == 0.0);
    CHECK(zero.H.isZero());
}

TEST_CASE("one-node grid reduces to a scalar")
{
    const KernelSpec g = make_builtin("gaussian");
    Grid grid;
    grid.truncation = 1.0;
    grid.order = 1;
    grid.panels = {0.0, 1.0};
    grid.s_nodes = grid.nodes = {0.5};
    grid.s_weights = grid.weights = {0.3};
    const DiscreteOperator op = discretize(g, 0.0, grid);
    const double w = grid.weights[0], h = g.phi(2 * grid.nodes[0]);
    CHECK(log_det(op, 0.7) == doctest::Approx(std::log(1 - 0.7 * w * w * h * h)).epsilon(1e-14));
    const ResolventResult r = resolvent_apply(op, 0.7, Eigen::VectorXd::Constant(1, 2.0));
    CHECK(r.u[0] == doctest::Approx(2.0 / (1 - 0.7 * w * w * h * h)).epsilon(1e-14));
}

TEST_CASE("resolvent with gamma zero is the identity")
{
    const KernelSpec g = make_builtin("gaussian");
    const DiscreteOperator op = discretize(g, 0.0, default_grid(g, 0.0));
    Eigen::VectorXd f(op.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = std::cos(op.grid.nodes[i]);
    const ResolventResult r = resolvent_apply(op, 0.0, f, std::pair{0.3, std::cos(0.3)});
    CHECK((r.u - f).norm() == 0.0);
    REQUIRE(r.boundary);
    CHECK(*r.boundary == doctest::Approx(std::cos(0.3)));
}

TEST_CASE("grid convergence of the determinant")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    const double base = log_fredholm(l, -2.0, 1.0);
    const double fine = log_fredholm(l, -2.0, 1.0, {32, 0.25, 0, 0.0, 1e-15});
    CHECK(std::abs(base - fine) < 1e-8);
}

TEST_CASE("determinant is monotone in t for the gaussian kernel")
{
    const KernelSpec g = make_builtin("gaussian");
    double prev = log_fredholm(g, -3.0, 1.0);
    for (double t = -2.5; t <= 3.0; t += 0.5) {
        const double cur = log_fredholm(g, t, 1.0);
        CHECK(cur > prev);
        CHECK(cur <= 0.0);
        prev = cur;
    }
}
