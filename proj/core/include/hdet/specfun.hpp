#pragma once

#include <complex>

namespace hdet {

using cplx = std::complex<double>;

/// Principal branch of log Gamma, cut along the negative real axis.
/// Throws PoleInput within 1e-12 of {0, -1, -2, ...}.
cplx log_gamma(cplx z);

struct AiryPair {
    double ai;
    double ai_prime;
};

/// Ai(x) and Ai'(x) for |x| <= 50, RangeExceeded otherwise.
AiryPair airy_ai(double x);

/// J_alpha(x) for alpha > -1 and x >= 0.
double bessel_j(double alpha, double x);

/// d/dx J_alpha(x), same domain as bessel_j except x > 0 when alpha < 1.
double bessel_j_prime(double alpha, double x);

} // namespace hdet
