#include "hdet/kernels.hpp"

#include "hdet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdet {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Profile gaussian_profile()
{
    return [](int k, double x) {
        const double g = std::exp(-x * x) / std::sqrt(kPi);
        switch (k) {
        case 0: return g;
        case 1: return -2.0 * x * g;
        default: return (4.0 * x * x - 2.0) * g;
        }
    };
}

Profile airy_profile()
{
    return [](int k, double x) {
        const AiryPair a = airy_ai(x);
        switch (k) {
        case 0: return a.ai;
        case 1: return a.ai_prime;
        default: return x * a.ai;
        }
    };
}

Profile laplace_profile(double a, double c)
{
    return [a, c](int k, double x) {
        const double f = c * std::exp(-a * std::abs(x));
        switch (k) {
        case 0: return f;
        case 1: return x > 0 ? -a * f : (x < 0 ? a * f : 0.0);
        default: return a * a * f;
        }
    };
}

Profile mult_laplace_profile(double a, double c)
{
    return [a, c](int k, double x) {
        if (!(x > 0)) fail(ErrorCode::RangeExceeded, "mult-laplace profile needs x > 0");
        const double f = c * std::exp(-a * std::abs(std::log(x))) / std::sqrt(x);
        const double m = x < 1 ? a - 0.5 : -a - 0.5;
        switch (k) {
        case 0: return f;
        case 1: return m * f;
        default: return m * m * f;
        }
    };
}

Profile bessel_profile(double alpha)
{
    return [alpha](int k, double x) {
        if (x < 0) fail(ErrorCode::RangeExceeded, "bessel profile needs x >= 0");
        const double u = std::sqrt(x);
        switch (k) {
        case 0: return 0.5 * bessel_j(alpha, u);
        case 1: return u == 0.0 ? 0.0 : 0.25 * u * bessel_j_prime(alpha, u);
        default: return u == 0.0 ? 0.0 : -(x - alpha * alpha) * bessel_j(alpha, u) / 8.0;
        }
    };
}

double positive_param(const std::map<std::string, double>& params, const std::string& key,
                      double fallback)
{
    auto it = params.find(key);
    const double v = it == params.end() ? fallback : it->second;
    if (!(v > 0) || !std::isfinite(v)) fail(ErrorCode::InvalidParam, key + " must be positive");
    return v;
}

void reject_unknown(const std::map<std::string, double>& params, std::initializer_list<const char*> known)
{
    for (const auto& [key, value] : params) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail(ErrorCode::InvalidParam, "unknown parameter '" + key + "'");
        if (!std::isfinite(value)) fail(ErrorCode::InvalidParam, "non-finite parameter '" + key + "'");
    }
}

/// Truncation length where an envelope of the given kind falls below e^{-logtol}.
double envelope_reach(const Decay& d, double logtol)
{
    switch (d.kind) {
    case Envelope::gaussian: return std::sqrt(logtol / d.rate);
    case Envelope::super_exponential: return std::pow(1.5 * logtol / d.rate, 2.0 / 3.0);
    default: return logtol / d.rate;
    }
}

double integrate(const std::function<double(double)>& f, double a, double b, double width,
                 const std::vector<double>& breakpoints)
{
    const QuadRule rule = composite_rule(a, b, 24, width, breakpoints);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, double width,
                 const std::vector<double>& breakpoints)
{
    const QuadRule rule = composite_rule(a, b, 24, width, breakpoints);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
}

void check_strip(const KernelSpec& spec, cplx z)
{
    constexpr double delta = 1e-6;
    if (spec.flavor == Flavor::additive) {
        if (spec.decay.kind == Envelope::exponential && std::abs(z.imag()) > spec.decay.rate - delta)
            fail(ErrorCode::StripViolation, "Im z outside the analyticity strip");
    } else if (spec.name != "bessel") {
        if (std::abs(z.real() - 0.5) > spec.decay.rate - delta)
            fail(ErrorCode::StripViolation, "Re z outside the Mellin strip");
    }
}

ReflectionPair reflection_quadrature(const KernelSpec& spec, cplx z)
{
    if (spec.flavor == Flavor::additive) {
        if (spec.one_sided) fail(ErrorCode::UnsupportedKernel, "no quadrature transform for one-sided kernels");
        const double margin = spec.decay.kind == Envelope::exponential ? std::abs(z.imag()) : 0.0;
        Decay d = spec.decay;
        d.rate -= margin;
        const double L = envelope_reach(d, 40.0);
        const double width = std::min(1.0, 10.0 / (1.0 + std::abs(z)));
        std::vector<double> bp{0.0};
        bp.insert(bp.end(), spec.kinks.begin(), spec.kinks.end());
        const cplx a = integrate_c([&](double y) { return spec.phi(y) * std::exp(-kI * z * y); }, -L, L,
                                   width, bp);
        const cplx b = integrate_c([&](double y) { return spec.psi(y) * std::exp(kI * z * y); }, -L, L,
                                   width, bp);
        return {-kI * a, kI * b, z};
    }
    if (spec.name == "bessel") fail(ErrorCode::UnsupportedKernel, "bessel Mellin transform is closed-form only");
    const double margin = std::abs(z.real() - 0.5);
    const double L = 40.0 / (spec.decay.rate - margin);
    const double width = std::min(1.0, 10.0 / (1.0 + std::abs(z)));
    std::vector<double> bp{0.0};
    for (double k : spec.kinks) bp.push_back(std::log(k));
    const cplx a = integrate_c([&](double u) { return std::exp(z * u) * spec.phi(std::exp(u)); }, -L, L, width, bp);
    const cplx b = integrate_c([&](double u) { return std::exp((1.0 - z) * u) * spec.psi(std::exp(u)); }, -L, L,
                               width, bp);
    return {a, b, z};
}

} // namespace

const char* flavor_name(Flavor flavor)
{
    return flavor == Flavor::additive ? "additive" : "multiplicative";
}

double KernelSpec::param(const std::string& key, double fallback) const
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

KernelSpec make_builtin(const std::string& name, const std::map<std::string, double>& params)
{
    KernelSpec s;
    s.name = name;
    s.params = params;
    if (name == "gaussian") {
        reject_unknown(params, {});
        s.flavor = Flavor::additive;
        s.phi_profile = s.psi_profile = gaussian_profile();
        s.decay = {1.0, Envelope::gaussian};
        s.reflection = [](cplx z) {
            const cplx e = std::exp(-z * z / 4.0);
            return ReflectionPair{-kI * e, kI * e, z};
        };
    } else if (name == "airy") {
        reject_unknown(params, {});
        s.flavor = Flavor::additive;
        s.phi_profile = s.psi_profile = airy_profile();
        s.decay = {1.0, Envelope::super_exponential};
        s.one_sided = true;
        s.reflection = [](cplx z) {
            const cplx e = z * z * z / 3.0;
            return ReflectionPair{-kI * std::exp(kI * e), kI * std::exp(-kI * e), z};
        };
    } else if (name == "laplace") {
        reject_unknown(params, {"a", "c"});
        const double a = positive_param(params, "a", 3.0);
        const double c = positive_param(params, "c", 1.0);
        s.params = {{"a", a}, {"c", c}};
        s.flavor = Flavor::additive;
        s.phi_profile = s.psi_profile = laplace_profile(a, c);
        s.decay = {a, Envelope::exponential};
        s.kinks = {0.0};
        s.reflection = [a, c](cplx z) {
            const cplx f = c * 2.0 * a / (a * a + z * z);
            return ReflectionPair{-kI * f, kI * f, z};
        };
    } else if (name == "mult-laplace") {
        reject_unknown(params, {"a", "c"});
        const double a = positive_param(params, "a", 3.0);
        const double c = positive_param(params, "c", 1.0);
        s.params = {{"a", a}, {"c", c}};
        s.flavor = Flavor::multiplicative;
        s.phi_profile = s.psi_profile = mult_laplace_profile(a, c);
        s.decay = {a, Envelope::exponential};
        s.kinks = {1.0};
        s.reflection = [a, c](cplx z) {
            const cplx w = z - 0.5;
            const cplx f = c * 2.0 * a / (a * a - w * w);
            return ReflectionPair{f, f, z};
        };
    } else if (name == "bessel") {
        reject_unknown(params, {"alpha"});
        const double alpha = s.param("alpha", 0.0);
        if (!(alpha > -1.0)) fail(ErrorCode::InvalidParam, "bessel requires alpha > -1");
        s.params = {{"alpha", alpha}};
        s.flavor = Flavor::multiplicative;
        s.phi_profile = s.psi_profile = bessel_profile(alpha);
        s.decay = {1.0, Envelope::exponential};
        s.reflection = [alpha](cplx z) {
            auto r = [alpha](cplx w) {
                return std::exp((2.0 * w - 1.0) * std::log(2.0) + log_gamma(alpha / 2.0 + w) -
                                log_gamma(alpha / 2.0 - w + 1.0));
            };
            return ReflectionPair{r(z), r(1.0 - z), z};
        };
    } else {
        fail(ErrorCode::UnknownKernel, "unknown kernel '" + name + "'");
    }
    validate(s);
    return s;
}

KernelSpec make_zero(Flavor flavor)
{
    KernelSpec s;
    s.flavor = flavor;
    s.name = "zero";
    s.is_zero = true;
    s.phi_profile = s.psi_profile = [](int, double) { return 0.0; };
    s.decay = {1.0, Envelope::exponential};
    s.reflection = [](cplx z) { return ReflectionPair{0.0, 0.0, z}; };
    return s;
}

void validate(const KernelSpec& spec)
{
    if (!spec.phi_profile || !spec.psi_profile) fail(ErrorCode::InvalidParam, "missing profile");
    if (!(spec.decay.rate > 0)) fail(ErrorCode::InvalidParam, "decay rate must be positive");
    if (spec.symmetric) {
        for (int i = 0; i < 64; ++i) {
            const double x = spec.flavor == Flavor::additive ? -4.0 + 8.0 * (i + 0.5) / 64 : 0.05 + 0.1 * i;
            if (spec.phi(x) != spec.psi(x)) fail(ErrorCode::InvalidParam, "symmetric spec with phi != psi");
        }
    }
    if (spec.flavor == Flavor::multiplicative) {
        const double x = 1e-10;
        if (std::sqrt(x) * std::abs(spec.phi(x)) > 10.0 || std::sqrt(x) * std::abs(spec.psi(x)) > 10.0)
            fail(ErrorCode::InvalidParam, "sqrt(x) phi(x) unbounded near 0");
    }
}

double eval_hankel_kernel(const KernelSpec& spec, double t, double x, double y)
{
    if (spec.flavor == Flavor::additive) return spec.phi(x + y + t);
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    return std::sqrt(t) * spec.phi(x * y * t);
}

double eval_hankel_kernel_psi(const KernelSpec& spec, double t, double x, double y)
{
    if (spec.flavor == Flavor::additive) return spec.psi(x + y + t);
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    return std::sqrt(t) * spec.psi(x * y * t);
}

double eval_composition_kernel(const KernelSpec& spec, double t, double x, double y, const Grid& inner)
{
    const bool unit = inner.domain == DomainKind::unit;
    if (unit != (spec.flavor == Flavor::multiplicative))
        fail(ErrorCode::FlavorDomain, "inner grid does not match the kernel flavor");
    double sum = 0.0;
    for (std::size_t k = 0; k < inner.size(); ++k) {
        const double z = inner.nodes[k];
        sum += inner.weights[k] * eval_hankel_kernel(spec, t, x, z) * eval_hankel_kernel_psi(spec, t, z, y);
    }
    return sum;
}

ReflectionPair reflection_coefficients(const KernelSpec& spec, cplx z, ReflectionMethod method)
{
    check_strip(spec, z);
    if (method == ReflectionMethod::quadrature) return reflection_quadrature(spec, z);
    if (spec.reflection) return spec.reflection(z);
    if (method == ReflectionMethod::closed_form) fail(ErrorCode::UnsupportedKernel, "no closed form available");
    return reflection_quadrature(spec, z);
}

double trace_norm_bound(const KernelSpec& spec, double t, const Grid& grid)
{
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.nodes[i];
        const double w = grid.weights[i];
        if (spec.flavor == Flavor::additive) {
            a += w * x * std::pow(spec.phi(x + t), 2);
            b += w * x * std::pow(spec.psi(x + t), 2);
        } else {
            a += w * t * std::log(1.0 / x) * std::pow(spec.phi(x * t), 2);
            b += w * t * std::log(1.0 / x) * std::pow(spec.psi(x * t), 2);
        }
    }
    return std::sqrt(a) * std::sqrt(b);
}

double composition_trace(const KernelSpec& spec, double t)
{
    if (spec.is_zero) return 0.0;
    if (spec.flavor == Flavor::additive) {
        const double L = std::max(0.0, -t) + envelope_reach(spec.decay, 45.0);
        std::vector<double> bp;
        for (double k : spec.kinks) bp.push_back(k - t);
        return integrate([&](double s) { return s * spec.phi(s + t) * spec.psi(s + t); }, 0.0, L, 0.25, bp);
    }
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    const double lo = std::min(-std::log(t), 0.0) - 45.0 / std::min(spec.decay.rate, 1.0);
    std::vector<double> bp;
    for (double k : spec.kinks) bp.push_back(std::log(k / t));
    return integrate(
        [&](double w) {
            const double y = t * std::exp(w);
            return -w * t * std::exp(w) * spec.phi(y) * spec.psi(y);
        },
        lo, 0.0, 0.25, bp);
}

double hankel_trace(const KernelSpec& spec, double t)
{
    if (spec.is_zero) return 0.0;
    if (spec.flavor == Flavor::additive) {
        const double L = 0.5 * (std::max(0.0, -t) + envelope_reach(spec.decay, 45.0));
        std::vector<double> bp;
        for (double k : spec.kinks) bp.push_back(0.5 * (k - t));
        return integrate([&](double x) { return spec.phi(2.0 * x + t); }, 0.0, L, 0.25, bp);
    }
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    const double lo = 0.5 * (std::min(-std::log(t), 0.0) - 45.0 / std::min(spec.decay.rate, 1.0));
    std::vector<double> bp;
    for (double k : spec.kinks) bp.push_back(0.5 * std::log(k / t));
    return integrate(
        [&](double w) { return std::sqrt(t) * std::exp(w) * spec.phi(t * std::exp(2.0 * w)); }, lo, 0.0, 0.25, bp);
}

} // namespace hdet
