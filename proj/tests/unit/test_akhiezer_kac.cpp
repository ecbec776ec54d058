#include <doctest.h>

#include "hdet/akhiezer_kac.hpp"
#include "hdet/errors.hpp"
#include "hdet/fredholm.hpp"

#include <cmath>

using namespace hdet;

namespace {

// Exact laplace a = 3: 1 - F^2 factors over the roots sqrt(3), sqrt(15), 3.
const double kS0 = 6.0 - std::sqrt(3.0) - std::sqrt(15.0);
const double kQuadratic = 0.023834025728496803;

} // namespace

TEST_CASE("laplace constants are exact")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    const AKExpansion e = ak_constants(l);
    CHECK(std::abs(e.linear_coefficient - kS0) < 1e-13);
    CHECK(std::abs(e.quadratic_term - kQuadratic) < 1e-13);
    CHECK(e.winding_term == 0.0);
    CHECK(e.symmetric_shortcut);
    CHECK(e.epsilon == doctest::Approx(1.0));
    CHECK(e.t0 == doctest::Approx(6.0));
}

TEST_CASE("closed quadratic term")
{
    const double lam[] = {std::sqrt(3.0), std::sqrt(15.0), 3.0};
    const double c[] = {1.0, 1.0, -2.0};
    double q = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q -= c[i] * c[j] * std::log(lam[i] + lam[j]);
    CHECK(q == doctest::Approx(kQuadratic).epsilon(1e-15));
}

TEST_CASE("contour doubling leaves the constants unchanged")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    const AKExpansion a = ak_constants(l);
    const AKExpansion b = ak_constants(l, {2.0});
    CHECK(std::abs(a.linear_coefficient - b.linear_coefficient) < 1e-14);
    CHECK(std::abs(a.quadratic_term - b.quadratic_term) < 1e-14);
}

TEST_CASE("convolution oracle")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    const ConvolutionSeries cs = convolution_oracle(l, 12);
    CHECK(std::abs(cs.s0_series - kS0) < 1e-8);
    CHECK(std::abs(cs.quadratic_series - kQuadratic) < 1e-6);
    CHECK(std::abs(cs.s0_partial - kS0) < 1e-5);
    CHECK(std::abs(s_profile(l, 0.0) - cs.s0_series) < 1e-8);
    CHECK_THROWS_AS(convolution_oracle(make_builtin("mult-laplace"), 4), Error);
    CHECK_THROWS_AS(convolution_oracle(l, 17), Error);
}

TEST_CASE("levin acceleration of a log series")
{
    std::vector<double> terms;
    for (int n = 1; n <= 14; ++n) terms.push_back(std::pow(0.5, n) / n);
    CHECK(std::abs(levin_sum(terms) - std::log(2.0)) < 1e-13);
}

TEST_CASE("omega profile")
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    for (double x : {0.0, 0.4, 1.3}) {
        const double exact = (1.0 + 3.0 * x) * std::exp(-3.0 * x) / 3.0;
        CHECK(std::abs(omega_profile(l, x) - exact) < 1e-13);
    }
}

TEST_CASE("multiplicative profiles")
{
    const KernelSpec m = make_builtin("mult-laplace", {{"a", 3.0}});
    const SPair p = s_profile_pair(m, 1.0);
    CHECK(std::abs(p.s - p.s_hat) < 1e-10);
    const AKExpansion e = ak_constants(m);
    CHECK(e.linear_coefficient == doctest::Approx(-p.s).epsilon(1e-14));
    CHECK(e.t0 == doctest::Approx(1e4));
    CHECK(ak_logF(e, 9e2).outside_range);
    CHECK(!ak_logF(e, 2e4).outside_range);
}

TEST_CASE("residual ladders")
{
    const GridOptions fine{32, 0.25, 0, 0.0, 1e-15};
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    const AKExpansion e = ak_constants(l);
    const double r6 = log_fredholm(l, -6.0, 1.0, fine) - ak_logF(e, -6.0).value;
    const double r8 = log_fredholm(l, -8.0, 1.0, fine) - ak_logF(e, -8.0).value;
    CHECK(std::abs(r8) <= 1e-3);
    CHECK(std::abs(r8) < std::abs(r6));
}

TEST_CASE("multiplicative residual obeys a fitted power law")
{
    const GridOptions fine{32, 0.25, 0, 0.0, 1e-15};
    const KernelSpec m = make_builtin("mult-laplace", {{"a", 3.0}});
    const AKExpansion e = ak_constants(m);
    const auto residual = [&](double t) { return std::abs(log_fredholm(m, t, 1.0, fine) - ak_logF(e, t).value); };
    const double c = std::max(residual(1e2) * std::sqrt(1e2), residual(3e2) * std::sqrt(3e2));
    CHECK(residual(1e3) <= c / std::sqrt(1e3));
}

TEST_CASE("refusals")
{
    CHECK_THROWS_AS(ak_constants(make_builtin("bessel")), Error);
    CHECK_THROWS_AS(ak_constants(make_builtin("airy")), Error);
    try {
        ak_constants(make_builtin("laplace", {{"a", 1.5}}));
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::StripViolation);
    }
    const AKExpansion z = ak_constants(make_zero(Flavor::additive));
    CHECK(z.linear_coefficient == 0.0);
    CHECK(z.quadratic_term == 0.0);
    CHECK(ak_logF(z, -5.0).value == 0.0);
}
