#pragma once

#include "hdet/fredholm.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hdet {

using Matrix2c = Eigen::Matrix2cd;

struct GreenPair {
    cplx y1;
    cplx y2;
};

/// y_1(x, z), y_2(x, z) off the contour (real axis, resp. 1/2 + iR).
GreenPair green_y(const KernelSpec& spec, cplx z, double x);

struct RHSample {
    cplx z;
    Matrix2c X;
    Flavor flavor = Flavor::additive;
    double t = 0.0;
};

/// X(z) assembled from resolvent solves against the shifted Green functions.
RHSample assemble_X(const KernelSpec& spec, double t, cplx z, const Grid& grid);

/// Jump matrix at a contour point.
Matrix2c jump_matrix(const KernelSpec& spec, double t, cplx z);

/// Contour point for parameter u: z = u (additive) or z = 1/2 + iu (multiplicative).
cplx contour_point(Flavor flavor, double u);

/// max |X_+ - X_- J| after polynomial extrapolation of the one-sided samples to delta = 0.
double jump_defect(const KernelSpec& spec, double t, double u, const std::vector<double>& deltas,
                   const Grid& grid);

/// Least-squares fit of z (X(z) - I) on the rays arg z = pi/4, 3pi/4 (additive) or
/// arg(z - 1/2) = +-pi/4 (multiplicative) with a 1/z, 1/z^2 tail.
Matrix2c x1_coefficient(const KernelSpec& spec, double t, const std::vector<double>& probe_radii, const Grid& grid);

/// The edge-function matrix X_1 is expected to match.
Matrix2c x1_prediction(const KernelSpec& spec, double t, const Grid& grid);

} // namespace hdet
