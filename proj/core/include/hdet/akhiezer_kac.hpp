#pragma once

#include "hdet/kernels.hpp"

namespace hdet {

struct AKOptions {
    /// Multiplies the contour cutoff; 2 doubles the truncated range.
    double contour_scale = 1.0;
};

struct AKExpansion {
    Flavor flavor = Flavor::additive;
    /// s(0) (additive) or -s(1) (multiplicative).
    double linear_coefficient = 0.0;
    double quadratic_term = 0.0;
    double winding_term = 0.0;
    bool symmetric_shortcut = false;
    /// Decay margin a - 2 and the start of the asymptotic range.
    double epsilon = 0.0;
    double t0 = 0.0;
    /// Contour cutoff |u| used for the symbol integrals.
    double contour_cutoff = 0.0;
};

/// s(x) for additive kernels.
double s_profile(const KernelSpec& spec, double x, const AKOptions& options = {});

struct SPair {
    double s = 0.0;
    double s_hat = 0.0;
};

/// s(x) and s_hat(x), x >= 1, for multiplicative kernels.
SPair s_profile_pair(const KernelSpec& spec, double x, const AKOptions& options = {});

AKExpansion ak_constants(const KernelSpec& spec, const AKOptions& options = {});

struct AKPrediction {
    double value = 0.0;
    /// Set when t lies before t0; the value is still returned.
    bool outside_range = false;
};

AKPrediction ak_logF(const AKExpansion& expansion, double t);
AKPrediction ak_logF(const KernelSpec& spec, double t);

/// omega(x) = int phi(x + y) psi(y) dy.
double omega_profile(const KernelSpec& spec, double x);

struct ConvolutionSeries {
    /// Levin-accelerated sums of the truncated series.
    double s0_series = 0.0;
    double quadratic_series = 0.0;
    double winding_series = 0.0;
    /// Plain partial sums and last-term magnitudes.
    double s0_partial = 0.0;
    double quadratic_partial = 0.0;
    double s0_last_term = 0.0;
    double quadratic_last_term = 0.0;
    double winding_last_term = 0.0;
    int n_max = 0;
    double step = 0.0;
    /// Samples of omega on the convolution grid x_i = (i - center) * step.
    std::vector<double> omega_grid;
    std::size_t center = 0;
};

/// Convolution series on a uniform grid of step 1/64. Additive symmetric kernels, n_max <= 16.
ConvolutionSeries convolution_oracle(const KernelSpec& spec, int n_max);

/// Levin u-transform of the partial sums of the given terms.
double levin_sum(const std::vector<double>& terms);

} // namespace hdet
