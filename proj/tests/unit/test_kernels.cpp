#include <doctest.h>

#include "hdet/errors.hpp"
#include "hdet/kernels.hpp"
#include "hdet/quadrature.hpp"
#include "hdet/specfun.hpp"

#include <cmath>

using namespace hdet;

TEST_CASE("builtin atlas metadata")
{
    const KernelSpec g = make_builtin("gaussian");
    CHECK(g.flavor == Flavor::additive);
    CHECK(g.symmetric);
    CHECK(g.decay.kind == Envelope::gaussian);
    const KernelSpec b = make_builtin("bessel", {{"alpha", 0.0}});
    CHECK(b.flavor == Flavor::multiplicative);
    CHECK(b.phi(1.0) == doctest::Approx(0.5 * bessel_j(0.0, 1.0)));
    CHECK(make_builtin("laplace", {{"a", 3.0}, {"c", 1.0}}).phi(0.0) == 1.0);
}

TEST_CASE("builtin rejects bad input")
{
    try {
        make_builtin("nosuch");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownKernel);
        CHECK(std::string(e.what()).find("unknown kernel") != std::string::npos);
        CHECK(e.is_usage());
    }
    CHECK_THROWS_AS(make_builtin("bessel", {{"alpha", -1.5}}), Error);
    CHECK_THROWS_AS(make_builtin("gaussian", {{"a", 1.0}}), Error);
}

TEST_CASE("hankel kernel values")
{
    CHECK(eval_hankel_kernel(make_builtin("gaussian"), 0.0, 0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(M_PI)));
    CHECK(eval_hankel_kernel(make_builtin("bessel", {{"alpha", 0.0}}), 4.0, 0.5, 0.5) ==
          doctest::Approx(bessel_j(0.0, 1.0)).epsilon(1e-15));
    CHECK(eval_hankel_kernel(make_builtin("laplace", {{"a", 3.0}}), -1.0, 1.0, 1.0) ==
          doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
}

TEST_CASE("gaussian composition kernel closed form")
{
    const KernelSpec g = make_builtin("gaussian");
    const Grid inner = halfline_grid(1.0, 0.0, 1e-15, 24, {Envelope::gaussian, 1.0, {}});
    for (double t : {-1.0, 0.0, 0.7})
        for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.3, 1.2}, std::pair{2.0, 0.5}}) {
            const double closed =
                std::exp(-(x - y) * (x - y) / 2) * std::erfc((x + y + 2 * t) / std::sqrt(2.0)) / (2 * std::sqrt(2 * M_PI));
            CHECK(std::abs(eval_composition_kernel(g, t, x, y, inner) - closed) < 1e-14);
        }
    CHECK(eval_composition_kernel(g, 0.0, 0.0, 0.0, inner) == doctest::Approx(0.199471140200716339).epsilon(1e-14));
    CHECK(eval_composition_kernel(make_zero(Flavor::additive), 0.0, 0.3, 0.4, inner) == 0.0);
}

TEST_CASE("reflection coefficients")
{
    const auto g = reflection_coefficients(make_builtin("gaussian"), 0.0);
    CHECK(std::abs(g.r1 - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(g.r2 - cplx(0, 1)) < 1e-15);
    for (double alpha : {0.0, 1.0, 2.5}) {
        const auto b = reflection_coefficients(make_builtin("bessel", {{"alpha", alpha}}), 0.5);
        CHECK(std::abs(b.r1 - 1.0) < 1e-13);
        CHECK(std::abs(b.r2 - 1.0) < 1e-13);
    }
    const auto l = reflection_coefficients(make_builtin("laplace", {{"a", 3.0}}), 0.0);
    CHECK(std::abs(l.r1 - cplx(0, -2.0 / 3.0)) < 1e-15);
}

TEST_CASE("closed-form reflection matches quadrature")
{
    for (const char* name : {"gaussian", "laplace"}) {
        const KernelSpec s = make_builtin(name);
        for (cplx z : {cplx(0.3, 0.0), cplx(-1.7, 0.4), cplx(2.5, -0.2)}) {
            const auto c = reflection_coefficients(s, z, ReflectionMethod::closed_form);
            const auto q = reflection_coefficients(s, z, ReflectionMethod::quadrature);
            CHECK(std::abs(c.r1 - q.r1) < 1e-12);
            CHECK(std::abs(c.r2 - q.r2) < 1e-12);
        }
    }
    const KernelSpec m = make_builtin("mult-laplace", {{"a", 3.0}});
    for (double u : {0.0, 0.8, -2.0}) {
        const cplx z{0.5, u};
        const auto c = reflection_coefficients(m, z, ReflectionMethod::closed_form);
        const auto q = reflection_coefficients(m, z, ReflectionMethod::quadrature);
        CHECK(std::abs(c.r1 - q.r1) < 1e-12);
    }
}

TEST_CASE("trace norm bound")
{
    const KernelSpec g = make_builtin("gaussian");
    CHECK(trace_norm_bound(g, 5.0, halfline_grid(1.0, 5.0, 1e-15, 24, {Envelope::gaussian, 1.0, {}})) <= 1e-9);
    CHECK(trace_norm_bound(make_zero(Flavor::additive), 0.0, halfline_grid(1.0, 0.0, 1e-15, 24)) == 0.0);
}

TEST_CASE("composition trace equals sum of hankel squares")
{
    const KernelSpec g = make_builtin("gaussian");
    const Grid grid = halfline_grid(1.0, 0.0, 1e-15, 24, {Envelope::gaussian, 1.0, {}});
    double direct = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double h = eval_hankel_kernel(g, 0.0, grid.nodes[i], grid.nodes[j]);
            direct += grid.weights[i] * grid.weights[j] * h * h;
        }
    CHECK(composition_trace(g, 0.0) == doctest::Approx(direct).epsilon(1e-13));
}
