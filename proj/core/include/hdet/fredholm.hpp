#pragma once

#include "hdet/kernels.hpp"
#include "hdet/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace hdet {

/// Overrides for the default operator grid. Zero means "use the default".
struct GridOptions {
    int order = 0;
    double max_width = 0.0;
    int panels = 0;
    double grading = 0.0;
    double tol = 1e-15;
};

/// Grid adapted to the kernel's decay, kinks and flavor at the given t.
Grid default_grid(const KernelSpec& spec, double t, const GridOptions& options = {});

struct DiscreteOperator {
    KernelSpec spec;
    Grid grid;
    double t = 0.0;
    /// H(x_i, x_j) and its psi counterpart (equal to H for symmetric kernels).
    Eigen::MatrixXd H;
    Eigen::MatrixXd H_psi;
    /// Quadrature-weighted Hankel matrices: (A f)_i approximates int H(x_i, y) f(y) dy.
    Eigen::MatrixXd A;
    Eigen::MatrixXd A_psi;
    /// Determinants use W^{1/2} H W^{1/2}; false when kink-aware product weights are in use.
    bool symmetrized = true;
    /// Reference traces of K_t and H_t applied as a first-order correction on kinked kernels.
    double trace_K = 0.0;
    double trace_H = 0.0;

    Flavor flavor() const { return spec.flavor; }
    std::size_t size() const { return grid.size(); }
    /// Composition kernel values K(x_i, x_j) = sum_k H(x_i, z_k) w_k H_psi(z_k, x_j).
    Eigen::MatrixXd K() const;
    /// Row r with r . f approximating int H(x, y) f(y) dy (psi = false) or the psi analog.
    Eigen::RowVectorXd extension_row(double x, bool psi) const;
};

DiscreteOperator discretize(const KernelSpec& spec, double t, const Grid& grid);

/// ln det(I - gamma K_t).
double log_det(const DiscreteOperator& op, double gamma);

/// ln det(I - sign * strength * H_t).
double log_det_hankel(const DiscreteOperator& op, int sign, double strength);

/// Convenience: ln F(t, gamma) on the default grid.
double log_fredholm(const KernelSpec& spec, double t, double gamma, const GridOptions& options = {});

/// LU factorization of I - gamma K_t (or of I - gamma K_t^* when adjoint is set).
class Resolvent {
public:
    Resolvent(const DiscreteOperator& op, double gamma, bool adjoint = false);

    Eigen::VectorXd solve(const Eigen::VectorXd& f) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& f) const;
    /// Nystrom extension u(x) = f(x) + gamma int K(x, y) u(y) dy.
    double extend(double x, double f_at_x, const Eigen::VectorXd& u) const;
    Eigen::RowVectorXd extend_row(double x) const;

    const DiscreteOperator& op() const { return *op_; }
    double gamma() const { return gamma_; }
    bool adjoint() const { return adjoint_; }

private:
    const DiscreteOperator* op_;
    double gamma_;
    bool adjoint_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct ResolventResult {
    Eigen::VectorXd u;
    std::optional<double> boundary;
};

ResolventResult resolvent_apply(const DiscreteOperator& op, double gamma, const Eigen::VectorXd& f,
                                std::optional<std::pair<double, double>> eval_at = std::nullopt,
                                bool adjoint = false);

/// Samples of q_n, p_n, q*_n, p*_n, n = 0..N, for the operator gamma K_t.
struct EdgeFunctions {
    Flavor flavor = Flavor::additive;
    std::vector<double> t_grid;
    int N = 0;
    double gamma = 1.0;
    std::vector<std::vector<double>> q, p, q_star, p_star;

    /// sqrt(gamma) q_0, the normalization entering the determinant-ratio identities.
    double q_gamma(std::size_t i) const;
    /// q_0 without the sqrt(gamma) factor.
    double q_plain(std::size_t i) const { return q[0][i]; }
};

struct EdgeSample {
    std::vector<double> q, p, q_star, p_star;
};

/// Edge functions at a single t on an explicit grid.
EdgeSample edge_sample(const KernelSpec& spec, double t, double gamma, int N, const Grid& grid);

EdgeFunctions edge_functions(const KernelSpec& spec, const std::vector<double>& t_grid, double gamma, int N,
                             const GridOptions& options = {});

struct ZsResidual {
    double dq = 0.0;
    double dp = 0.0;
    double dq_star = 0.0;
    double dp_star = 0.0;
    double max() const;
};

/// Five-point central differences of the sampled families against the flow equations.
/// Multiplicative samples are differenced in ln t.
ZsResidual zs_residual(const KernelSpec& spec, const EdgeFunctions& ef, double fd_step,
                       const GridOptions& options = {});

enum class InvariantSign { plus, minus };

struct InvariantSeries {
    std::vector<double> values;
    double drift = 0.0;
};

/// I_n over the t grid. The sum enters with a plus sign for additive and a minus sign for
/// multiplicative kernels unless overridden.
InvariantSeries conserved_invariant(const EdgeFunctions& ef, int n, std::optional<InvariantSign> sign = {});

/// |((I - gamma K)^{-1} tau_{t+a} phi)(x) - ((I - gamma K)^{-1} tau_{t+x} phi)(a)|, dilations for the
/// multiplicative flavor.
double resolvent_symmetry_defect(const KernelSpec& spec, double t, double a, double x, double gamma,
                                 const GridOptions& options = {});

/// Five-point central difference.
double fd_derivative(const std::function<double(double)>& f, double t, double h);
/// Five-point second difference.
double fd_second(const std::function<double(double)>& f, double t, double h);

} // namespace hdet
