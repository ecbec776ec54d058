#pragma once

#include "hdet/fredholm.hpp"

#include <vector>

namespace hdet {

struct TWResult {
    double t = 0.0;
    double gamma = 0.0;
    double logF = 0.0;
    double omega = 0.0;
    double logG_plus = 0.0;
    double logG_minus = 0.0;
};

/// ln F(t, gamma) from the edge function q(s, gamma) integrated over s.
double tw_logF(const KernelSpec& spec, double t, double gamma, const GridOptions& options = {});

/// int_t^inf q(s, gamma) ds, or int_0^t q(s, gamma) ds / sqrt(s).
double omega(const KernelSpec& spec, double t, double gamma, const GridOptions& options = {});

/// Determinants ln F, ln G(t, +-sqrt(gamma)) on the default grid together with omega.
TWResult tw_result(const KernelSpec& spec, double t, double gamma, const GridOptions& options = {});

enum class PerturbedKind { F11, F12, F4 };
enum class PerturbedMethod { direct, closed };

const char* perturbed_name(PerturbedKind which);

/// F_1^[1], F_1^[2] or F_4. Direct: resolvent integral against the bracket.
/// Closed: cosh / sinh of omega. Symmetric kernels only (AsymmetricKernel).
double perturbed(const KernelSpec& spec, double t, double gamma, PerturbedKind which, PerturbedMethod method,
                 const GridOptions& options = {});

/// The same quantities as squares / combinations of G(t, +-sqrt(gamma)).
double perturbed_from_G(const KernelSpec& spec, double t, double gamma, PerturbedKind which,
                        const GridOptions& options = {});

struct OdeSamples {
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> dq;
};

/// q'' = t q + 2 q^3 integrated backward from (Ai, Ai') at t_seed. BlowUp if |q| > 1e3.
OdeSamples pii_oracle(const std::vector<double>& t_grid, double t_seed = 8.0);

/// Hard-edge ODE for q_0 integrated forward in ln t from the small-t series at t_seed.
/// SingularCoefficient when q^2 comes within 1e-6 of 1/4 off the constant solution.
OdeSamples bessel_ode_oracle(double alpha, const std::vector<double>& t_grid, double t_seed = 1e-6);

/// Residual of the Painleve-II equation, resp. the hard-edge ODE, at a point.
double pii_residual(double t, double q, double dq, double d2q);
double bessel_ode_residual(double alpha, double t, double q, double dq, double d2q);

} // namespace hdet
