#include "hdet/specfun.hpp"

#include "hdet/errors.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace hdet {

namespace {

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> stirling_coeffs = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

cplx stirling(cplx w)
{
    const cplx inv = 1.0 / w;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx power = inv;
    for (double c : stirling_coeffs) {
        series += c * power;
        power *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

} // namespace

cplx log_gamma(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(ErrorCode::RangeExceeded, "log_gamma: non-finite argument");
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z - cplx(nearest, 0.0)) < 1e-12)
        fail(ErrorCode::PoleInput, "log_gamma: argument at a pole");
    if (z.real() < -1e4)
        fail(ErrorCode::RangeExceeded, "log_gamma: real part below -1e4");

    constexpr double threshold = 12.0;
    cplx shift_sum = 0.0;
    cplx w = z;
    while (w.real() < threshold) {
        shift_sum += std::log(w);
        w += 1.0;
    }
    return stirling(w) - shift_sum;
}

AiryPair airy_ai(double x)
{
    if (!std::isfinite(x) || std::abs(x) > 50.0)
        fail(ErrorCode::RangeExceeded, "airy_ai: |x| > 50");
    return {boost::math::airy_ai(x), boost::math::airy_ai_prime(x)};
}

double bessel_j(double alpha, double x)
{
    if (!(alpha > -1.0))
        fail(ErrorCode::InvalidOrder, "bessel_j: alpha must exceed -1");
    if (!(x >= 0.0) || !std::isfinite(x))
        fail(ErrorCode::RangeExceeded, "bessel_j: x must be finite and nonnegative");
    if (x == 0.0) {
        if (alpha == 0.0)
            return 1.0;
        if (alpha > 0.0)
            return 0.0;
        fail(ErrorCode::RangeExceeded, "bessel_j: x = 0 with alpha < 0");
    }
    return boost::math::cyl_bessel_j(alpha, x);
}

double bessel_j_prime(double alpha, double x)
{
    if (!(alpha > -1.0))
        fail(ErrorCode::InvalidOrder, "bessel_j_prime: alpha must exceed -1");
    if (!(x >= 0.0) || !std::isfinite(x))
        fail(ErrorCode::RangeExceeded, "bessel_j_prime: x must be finite and nonnegative");
    if (x == 0.0) {
        if (alpha == 1.0)
            return 0.5;
        if (alpha == 0.0 || alpha > 1.0)
            return 0.0;
        fail(ErrorCode::RangeExceeded, "bessel_j_prime: x = 0 with alpha < 1");
    }
    return boost::math::cyl_bessel_j_prime(alpha, x);
}

} // namespace hdet
