#include <doctest.h>

#include "hdet/errors.hpp"
#include "hdet/tracy_widom.hpp"

#include <cmath>

using namespace hdet;

TEST_CASE("tracy-widom representation matches the determinant")
{
    const KernelSpec g = make_builtin("gaussian");
    CHECK(std::abs(tw_logF(g, -1.0, 1.0) - log_fredholm(g, -1.0, 1.0)) <= 1e-5);
    CHECK(tw_logF(g, 0.0, 0.0) == 0.0);
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    CHECK(std::abs(tw_logF(b, 2.0, 1.0) - log_fredholm(b, 2.0, 1.0)) <= 1e-5);
    const KernelSpec b1 = make_builtin("bessel", {{"alpha", 1.0}});
    CHECK(std::abs(tw_logF(b1, 1.5, 0.5) - log_fredholm(b1, 1.5, 0.5)) <= 1e-10);
}

TEST_CASE("determinant ratio identity")
{
    for (auto [spec, t] : {std::pair{make_builtin("gaussian"), 0.0}, std::pair{make_builtin("bessel", {{"alpha", 1.0}}), 1.0}}) {
        const TWResult r = tw_result(spec, t, 1.0);
        CHECK(std::abs(r.logG_plus - r.logG_minus + r.omega) <= 1e-5);
    }
    CHECK(omega(make_builtin("gaussian"), 0.0, 0.0) == 0.0);
}

TEST_CASE("perturbed determinants")
{
    const KernelSpec g = make_builtin("gaussian");
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    for (PerturbedKind k : {PerturbedKind::F11, PerturbedKind::F12, PerturbedKind::F4}) {
        CHECK(perturbed(g, 0.5, 0.0, k, PerturbedMethod::direct) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(perturbed(g, 0.5, 0.0, k, PerturbedMethod::closed) == doctest::Approx(1.0).epsilon(1e-15));
    }
    const double d = perturbed(g, 0.0, 1.0, PerturbedKind::F4, PerturbedMethod::direct);
    const double c = perturbed(g, 0.0, 1.0, PerturbedKind::F4, PerturbedMethod::closed);
    CHECK(std::abs(d - c) <= 1e-6 * std::abs(c));

    const double gamma = 0.5, gc = gamma * (2 - gamma);
    const double d12 = perturbed(b, 1.0, gamma, PerturbedKind::F12, PerturbedMethod::direct);
    const double c12 = perturbed(b, 1.0, gamma, PerturbedKind::F12, PerturbedMethod::closed);
    CHECK(std::abs(d12 - c12) <= 1e-6 * c12);
    const TWResult r = tw_result(b, 1.0, gc);
    const double convex = std::sqrt((1 - std::sqrt(gc)) / (2 * (2 - gamma))) * std::exp(r.logG_minus) +
                          std::sqrt((1 + std::sqrt(gc)) / (2 * (2 - gamma))) * std::exp(r.logG_plus);
    CHECK(std::abs(c12 - convex * convex) <= 1e-12);
    CHECK(std::abs(perturbed_from_G(b, 1.0, gamma, PerturbedKind::F12) - c12) <= 1e-12);
}

TEST_CASE("painleve-ii oracle")
{
    const OdeSamples o = pii_oracle({-1.0, 0.0, 1.0, 3.0});
    // Frozen from the integrator; the Hastings-McLeod literature value is 0.367061551548...
    CHECK(o.q[1] == doctest::Approx(0.36706155155969589).epsilon(1e-13));
    CHECK(std::abs(o.q[1] - 0.36706155154807) < 1e-10);
    const KernelSpec a = make_builtin("airy");
    for (std::size_t i = 0; i < o.t.size(); ++i) {
        CHECK(std::abs(edge_sample(a, o.t[i], 1.0, 0, default_grid(a, o.t[i])).q[0] - o.q[i]) <= 1e-5);
        const double d2 = 2 * std::pow(o.q[i], 3) + o.t[i] * o.q[i];
        CHECK(std::abs(pii_residual(o.t[i], o.q[i], o.dq[i], d2)) < 1e-14);
    }
}

TEST_CASE("bessel ODE oracle")
{
    const OdeSamples o0 = bessel_ode_oracle(0.0, {0.5, 1.0});
    for (double q : o0.q) CHECK(q == 0.5);
    const KernelSpec b = make_builtin("bessel", {{"alpha", 1.0}});
    const OdeSamples o1 = bessel_ode_oracle(1.0, {0.5, 1.0, 2.0});
    for (std::size_t i = 0; i < o1.t.size(); ++i)
        CHECK(std::abs(edge_sample(b, o1.t[i], 1.0, 0, default_grid(b, o1.t[i])).q[0] - o1.q[i]) <= 1e-9);
}

TEST_CASE("painleve-ii blow-up is reported")
{
    CHECK_THROWS_AS(pii_oracle({-30.0}, 8.0), Error);
}
