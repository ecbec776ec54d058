#include "hdet/akhiezer_kac.hpp"

#include "hdet/errors.hpp"
#include "hdet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdet {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

/// The remainder -ln(1 - R) - R is O(R^2); the contour ends where it drops below 1e-16.
constexpr double kRemainderCut = 1.4e-8;
constexpr double kPanel = 0.5;
constexpr int kOrder = 16;
/// Largest |xi| the cached contour nodes resolve (GL order 16 panels of width 0.5).
constexpr double kMaxCachedXi = 16.0;

void require_supported(const KernelSpec& spec)
{
    if (spec.name == "airy" || spec.name == "bessel" || spec.one_sided)
        fail(ErrorCode::UnsupportedKernel, "the asymptotic expansion does not apply to " + spec.name);
    if (spec.decay.kind == Envelope::exponential && spec.decay.rate <= 2.0)
        fail(ErrorCode::StripViolation, "decay rate must exceed 2");
}

double quad(const std::function<double(double)>& f, double a, double b, double width,
            const std::vector<double>& bps)
{
    const QuadRule r = composite_rule(a, b, 24, width, bps);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
}

double reach(const KernelSpec& spec)
{
    return spec.decay.kind == Envelope::exponential ? 40.0 / spec.decay.rate : 8.0;
}

/// Inverse transform of r1 r2 along the contour, as a function of the Fourier variable xi.
double omega_sigma(const KernelSpec& spec, double xi)
{
    if (spec.flavor == Flavor::additive) return omega_profile(spec, xi);
    // Mellin convolution int phi(x y) psi(y) dy at x = e^{-xi}, times e^{-xi/2}.
    const double lx = -xi;
    const double L = reach(spec) + std::abs(lx);
    std::vector<double> bps;
    for (double k : spec.kinks) {
        bps.push_back(std::log(k) - lx);
        bps.push_back(std::log(k));
    }
    const double m = quad(
        [&](double v) { return spec.phi(std::exp(lx + v)) * spec.psi(std::exp(v)) * std::exp(v); }, -L, L,
        kPanel, bps);
    return std::exp(-0.5 * xi) * m;
}

cplx contour_z(Flavor flavor, double u)
{
    return flavor == Flavor::additive ? cplx(u, 0.0) : cplx(0.5, u);
}

/// Cached contour quadrature of the symbol remainder g(u) = -ln(1 - R(u)) - R(u).
class Symbol {
public:
    Symbol(const KernelSpec& spec, double scale) : spec_(spec)
    {
        double u = 1.0;
        while (std::max(std::abs(R(u)), std::abs(R(-u))) > kRemainderCut) {
            u *= 2.0;
            if (u > 1e6) fail(ErrorCode::TruncationFailure, "symbol does not decay along the contour");
        }
        cutoff_ = std::ceil(u * scale / kPanel) * kPanel;
        const QuadRule& gl = gauss_legendre(kOrder);
        for (double a = -cutoff_; a < cutoff_ - 1e-12; a += kPanel) {
            for (int i = 0; i < kOrder; ++i) {
                const double x = a + 0.5 * kPanel * (1.0 + gl.nodes[i]);
                nodes_.push_back(x);
                weights_.push_back(0.5 * kPanel * gl.weights[i]);
                g_.push_back(remainder(x));
            }
        }
        if (std::abs(R(0.0)) >= 1.0) fail(ErrorCode::SymbolNotSubunit, "|r1 r2| >= 1 on the contour");
    }

    cplx R(double u) const
    {
        const ReflectionPair r = reflection_coefficients(spec_, contour_z(spec_.flavor, u));
        return r.r1 * r.r2;
    }

    cplx remainder(double u) const
    {
        const cplx R0 = R(u);
        if (std::abs(R0) >= 1.0) fail(ErrorCode::SymbolNotSubunit, "|r1 r2| >= 1 on the contour");
        return -std::log(1.0 - R0) - R0;
    }

    /// (1 / 2 pi) int -ln(1 - R(u)) e^{i xi u} du.
    double sigma(double xi) const
    {
        cplx acc = 0.0;
        if (std::abs(xi) <= kMaxCachedXi) {
            for (std::size_t k = 0; k < nodes_.size(); ++k) acc += weights_[k] * g_[k] * std::exp(kI * xi * nodes_[k]);
        } else {
            const double width = 8.0 / std::abs(xi);
            const QuadRule r = composite_rule(-cutoff_, cutoff_, kOrder, width);
            for (std::size_t k = 0; k < r.nodes.size(); ++k)
                acc += r.weights[k] * remainder(r.nodes[k]) * std::exp(kI * xi * r.nodes[k]);
        }
        return omega_sigma(spec_, xi) + acc.real() / (2.0 * kPi);
    }

    /// (i / 4 pi) int (r1'/r1 - r2'/r2)(u) ln(1 - R(u)) du with u-derivatives along the contour.
    double winding() const
    {
        const double h = 1e-3;
        const auto lr = [&](double u, int which) {
            const ReflectionPair r = reflection_coefficients(spec_, contour_z(spec_.flavor, u));
            return which == 1 ? r.r1 : r.r2;
        };
        const auto dlog = [&](double u, int which) {
            const cplx d = (lr(u - 2 * h, which) - 8.0 * lr(u - h, which) + 8.0 * lr(u + h, which) -
                            lr(u + 2 * h, which)) /
                           (12.0 * h);
            return d / lr(u, which);
        };
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double u = nodes_[k];
            acc += weights_[k] * (dlog(u, 1) - dlog(u, 2)) * std::log(1.0 - R(u));
        }
        return (kI * acc / (4.0 * kPi)).real();
    }

    double cutoff() const { return cutoff_; }

private:
    const KernelSpec& spec_;
    double cutoff_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<cplx> g_;
};

bool has_shortcut(const KernelSpec& spec)
{
    if (!spec.symmetric) return false;
    for (double x : {0.1, 0.37, 0.9, 1.7, 3.1}) {
        if (spec.flavor == Flavor::additive) {
            if (spec.phi(x) != spec.phi(-x)) return false;
        } else if (std::abs(spec.phi(1.0 / x) - x * spec.phi(x)) > 1e-14 * std::abs(spec.phi(1.0 / x))) {
            return false;
        }
    }
    return true;
}

double walk(const std::function<double(double)>& f, double width)
{
    const QuadRule& gl = gauss_legendre(20);
    double total = 0.0, a = 0.0;
    int quiet = 0;
    for (int k = 0; k < 400; ++k) {
        double panel = 0.0;
        for (int i = 0; i < 20; ++i) panel += gl.weights[i] * f(a + 0.5 * width * (1.0 + gl.nodes[i]));
        panel *= 0.5 * width;
        total += panel;
        quiet = std::abs(panel) <= 1e-17 * std::max(1.0, std::abs(total)) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
        a += width;
    }
    fail(ErrorCode::TruncationFailure, "profile integral did not converge");
}

/// Discrete convolution h sum_j f(x_i - x_j) g(x_j) on the centered grid.
std::vector<double> convolve(const std::vector<double>& f, const std::vector<double>& g, std::size_t c, double h)
{
    const std::ptrdiff_t M = static_cast<std::ptrdiff_t>(f.size());
    const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(c);
    std::vector<double> out(f.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < M; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i + cc - (M - 1));
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(M - 1, i + cc);
        double s = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) s += f[i - j + cc] * g[j];
        out[i] = h * s;
    }
    return out;
}

void check_ratio(const std::vector<double>& terms, const char* what)
{
    for (std::size_t n = 1; n < terms.size(); ++n)
        if (std::abs(terms[n]) >= std::abs(terms[n - 1]) && std::abs(terms[n - 1]) > 1e-300)
            fail(ErrorCode::SeriesDiverging, std::string(what) + " terms do not decay");
}

} // namespace

double omega_profile(const KernelSpec& spec, double x)
{
    if (spec.is_zero) return 0.0;
    const double L = reach(spec) + std::abs(x);
    std::vector<double> bps;
    for (double k : spec.kinks) {
        bps.push_back(k - x);
        bps.push_back(k);
    }
    return quad([&](double y) { return spec.phi(x + y) * spec.psi(y); }, -L, L, kPanel, bps);
}

double s_profile(const KernelSpec& spec, double x, const AKOptions& options)
{
    if (spec.flavor != Flavor::additive) fail(ErrorCode::FlavorDomain, "s_profile needs an additive kernel");
    if (spec.is_zero) return 0.0;
    require_supported(spec);
    return Symbol(spec, options.contour_scale).sigma(x);
}

SPair s_profile_pair(const KernelSpec& spec, double x, const AKOptions& options)
{
    if (spec.flavor != Flavor::multiplicative) fail(ErrorCode::FlavorDomain, "s_profile_pair needs a multiplicative kernel");
    if (!(x >= 1.0)) fail(ErrorCode::InvalidParam, "s and s_hat are defined for x >= 1");
    if (spec.is_zero) return {};
    require_supported(spec);
    const Symbol sym(spec, options.contour_scale);
    const double lx = std::log(x);
    return {sym.sigma(-lx) / std::sqrt(x), sym.sigma(lx) / std::sqrt(x)};
}

AKExpansion ak_constants(const KernelSpec& spec, const AKOptions& options)
{
    AKExpansion e;
    e.flavor = spec.flavor;
    e.epsilon = spec.decay.rate - 2.0;
    e.t0 = spec.flavor == Flavor::additive ? 6.0 / e.epsilon : std::pow(10.0, 4.0 / e.epsilon);
    if (spec.is_zero) {
        e.symmetric_shortcut = true;
        return e;
    }
    require_supported(spec);
    const Symbol sym(spec, options.contour_scale);
    e.contour_cutoff = sym.cutoff();
    const double s0 = sym.sigma(0.0);
    e.linear_coefficient = spec.flavor == Flavor::additive ? s0 : -s0;
    e.quadratic_term = walk([&](double x) { return sym.sigma(x) * sym.sigma(-x) * x; }, 0.5);
    e.symmetric_shortcut = has_shortcut(spec);
    e.winding_term = e.symmetric_shortcut ? 0.0 : sym.winding();
    return e;
}

AKPrediction ak_logF(const AKExpansion& e, double t)
{
    AKPrediction p;
    if (e.flavor == Flavor::additive) {
        p.value = e.linear_coefficient * t + e.quadratic_term + e.winding_term;
        p.outside_range = t > -e.t0;
    } else {
        if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative t must be positive");
        p.value = e.linear_coefficient * std::log(t) + e.quadratic_term + e.winding_term;
        p.outside_range = t < e.t0;
    }
    return p;
}

AKPrediction ak_logF(const KernelSpec& spec, double t)
{
    return ak_logF(ak_constants(spec), t);
}

double levin_sum(const std::vector<double>& terms)
{
    if (terms.empty()) return 0.0;
    const std::size_t k = terms.size() - 1;
    double num = 0.0, den = 0.0, partial = 0.0, binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
        partial += terms[j];
        if (terms[j] == 0.0) return partial;
        const double c = (j % 2 ? -1.0 : 1.0) * binom *
                         std::pow((1.0 + j) / (1.0 + k), static_cast<double>(k) - 1.0);
        const double w = c / ((1.0 + j) * terms[j]);
        num += w * partial;
        den += w;
        binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    return num / den;
}

ConvolutionSeries convolution_oracle(const KernelSpec& spec, int n_max)
{
    if (n_max < 1 || n_max > 16) fail(ErrorCode::InvalidParam, "n_max must lie in [1, 16]");
    if (spec.flavor != Flavor::additive) fail(ErrorCode::FlavorDomain, "convolution series need an additive kernel");
    ConvolutionSeries out;
    out.n_max = n_max;
    out.step = 1.0 / 64.0;
    if (spec.is_zero) return out;
    if (!spec.symmetric) fail(ErrorCode::AsymmetricKernel, "convolution series need phi == psi");
    require_supported(spec);
    const double h = out.step;
    const double L = (60.0 + 4.0 * n_max) / spec.decay.rate;
    const std::size_t c = static_cast<std::size_t>(std::ceil(L / h));
    const std::size_t M = 2 * c + 1;
    out.center = c;
    std::vector<double> w(M), phi(M), psi(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double x = (static_cast<double>(i) - static_cast<double>(c)) * h;
        w[i] = omega_profile(spec, x);
        phi[i] = spec.phi(x);
        psi[i] = spec.psi(x);
    }
    out.omega_grid = w;

    std::vector<std::vector<double>> pw{w};
    for (int n = 2; n <= n_max; ++n) pw.push_back(convolve(w, pw.back(), c, h));

    std::vector<double> s0_terms;
    for (int n = 1; n <= n_max; ++n) s0_terms.push_back(pw[n - 1][c] / n);
    check_ratio(std::vector<double>(s0_terms.begin(), s0_terms.begin() + std::min(3, n_max)), "omega");
    for (double v : s0_terms) out.s0_partial += v;
    out.s0_last_term = std::abs(s0_terms.back());
    out.s0_series = levin_sum(s0_terms);

    // Diagonal sums over n + m = d of (1 / n m) int_0^inf omega^{*n}(x) omega^{*m}(-x) x dx.
    std::vector<double> diag;
    for (int d = 2; d <= n_max; ++d) {
        double acc = 0.0;
        for (int n = 1; n < d; ++n) {
            const int m = d - n;
            double s = 0.0;
            for (std::size_t i = c + 1; i < M; ++i)
                s += pw[n - 1][i] * pw[m - 1][2 * c - i] * (static_cast<double>(i - c) * h);
            // Euler-Maclaurin end correction: the integrand vanishes at 0 with slope omega^{*n}(0) omega^{*m}(0).
            s = h * s + h * h / 12.0 * pw[n - 1][c] * pw[m - 1][c];
            acc += s / (static_cast<double>(n) * m);
        }
        diag.push_back(acc);
    }
    for (double v : diag) out.quadratic_partial += v;
    if (!diag.empty()) {
        out.quadratic_last_term = std::abs(diag.back());
        out.quadratic_series = levin_sum(diag);
    }

    // sum_n (1 / n^2) int x phi^{*n}(x) psi^{*n}(x) dx.
    std::vector<double> fp = phi, fq = psi;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) {
            fp = convolve(phi, fp, c, h);
            fq = convolve(psi, fq, c, h);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i)
            s += (static_cast<double>(i) - static_cast<double>(c)) * h * fp[i] * fq[i];
        const double term = h * s / (static_cast<double>(n) * n);
        out.winding_series += term;
        out.winding_last_term = std::abs(term);
    }
    return out;
}

} // namespace hdet
