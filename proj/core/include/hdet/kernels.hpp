#pragma once

#include "hdet/quadrature.hpp"
#include "hdet/specfun.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace hdet {

enum class Flavor { additive, multiplicative };

const char* flavor_name(Flavor flavor);

/// (k, x) -> D^k f(x) for the additive flavor, (MD)^k f(x) for the multiplicative one, k = 0, 1, 2.
using Profile = std::function<double(int, double)>;

struct Decay {
    double rate = 1.0;
    Envelope kind = Envelope::exponential;
};

struct ReflectionPair {
    cplx r1;
    cplx r2;
    cplx z;
};

using ReflectionFormula = std::function<ReflectionPair(cplx)>;

struct KernelSpec {
    Flavor flavor = Flavor::additive;
    std::string name;
    std::map<std::string, double> params;
    Profile phi_profile;
    Profile psi_profile;
    Decay decay;
    bool symmetric = true;
    bool is_zero = false;
    /// Additive: the envelope only controls x -> +infinity.
    bool one_sided = false;
    /// Points where phi or psi fail to be smooth (native variable).
    std::vector<double> kinks;
    /// Closed-form reflection coefficients, empty when only quadrature is available.
    ReflectionFormula reflection;

    double phi(double x) const { return phi_profile(0, x); }
    double psi(double x) const { return psi_profile(0, x); }
    double phi_prime(double x) const { return phi_profile(1, x); }
    double psi_prime(double x) const { return psi_profile(1, x); }
    double param(const std::string& key, double fallback) const;
};

/// Built-in atlas: gaussian, airy, laplace (additive); bessel, mult-laplace (multiplicative).
KernelSpec make_builtin(const std::string& name, const std::map<std::string, double>& params = {});

/// phi = psi = 0 in the requested flavor.
KernelSpec make_zero(Flavor flavor);

/// Checks the structural invariants of a spec; InvalidParam on violation.
void validate(const KernelSpec& spec);

/// phi(x+y+t), or sqrt(t) phi(x y t).
double eval_hankel_kernel(const KernelSpec& spec, double t, double x, double y);

/// Same with psi.
double eval_hankel_kernel_psi(const KernelSpec& spec, double t, double x, double y);

/// K_t(x, y) by quadrature over the inner grid.
double eval_composition_kernel(const KernelSpec& spec, double t, double x, double y, const Grid& inner);

enum class ReflectionMethod { automatic, closed_form, quadrature };

ReflectionPair reflection_coefficients(const KernelSpec& spec, cplx z,
                                       ReflectionMethod method = ReflectionMethod::automatic);

/// Product of the two weighted L2 norms bounding the trace norm of K_t.
double trace_norm_bound(const KernelSpec& spec, double t, const Grid& grid);

/// Trace of K_t by composite quadrature split at the kinks.
double composition_trace(const KernelSpec& spec, double t);

/// Trace of H_t, same scheme.
double hankel_trace(const KernelSpec& spec, double t);

} // namespace hdet
