#include "hdet/tracy_widom.hpp"

#include "hdet/errors.hpp"
#include "hdet/specfun.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace hdet {

namespace {

constexpr double kPanelTol = 1e-17;
constexpr int kMaxPanels = 400;
constexpr int kOrder = 20;

struct QPair {
    double q;
    double q_star;
};

QPair scaled_q(const KernelSpec& spec, double s, double gamma, const GridOptions& options)
{
    const EdgeSample e = edge_sample(spec, s, gamma, 0, default_grid(spec, s, options));
    const double r = std::sqrt(gamma);
    return {r * e.q[0], r * e.q_star[0]};
}

/// Walks panels of the given width away from `start` until two consecutive panels contribute
/// less than kPanelTol. `breaks` are extra panel boundaries.
template <class F>
double walk_integral(F&& f, double start, double width, std::vector<double> breaks)
{
    std::sort(breaks.begin(), breaks.end());
    const QuadRule& gl = gauss_legendre(kOrder);
    double total = 0.0;
    double a = start;
    int quiet = 0;
    for (int k = 0; k < kMaxPanels; ++k) {
        double b = a + width;
        for (double br : breaks)
            if (br > a + 1e-12 && br < b) {
                b = br;
                break;
            }
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        double panel = 0.0;
        for (int i = 0; i < kOrder; ++i) panel += gl.weights[i] * f(m + h * gl.nodes[i]);
        panel *= h;
        total += panel;
        quiet = std::abs(panel) <= kPanelTol * std::max(1.0, std::abs(total)) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
        a = b;
    }
    fail(ErrorCode::TruncationFailure, "s-integral did not converge");
}

/// Panel width and breakpoints of the s-quadrature: additive in s - t, multiplicative in ln(t / s).
std::vector<double> s_breaks(const KernelSpec& spec, double t)
{
    std::vector<double> out;
    for (double k : spec.kinks) {
        if (spec.flavor == Flavor::additive) {
            if (k > t) out.push_back(k - t);
        } else if (k > 0 && k < t) {
            out.push_back(std::log(t / k));
        }
    }
    return out;
}

double s_width(const KernelSpec& spec)
{
    if (spec.flavor == Flavor::additive) return spec.decay.kind == Envelope::exponential ? 0.5 : 1.0;
    return 2.0;
}

void require_symmetric(const KernelSpec& spec)
{
    if (!spec.symmetric) fail(ErrorCode::AsymmetricKernel, "perturbed determinants need phi == psi");
}

void check_gamma(double gamma)
{
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorCode::InvalidParam, "gamma must lie in [0, 1]");
}

/// Integrals of phi(y + t) over [0, x] (additive) or sqrt(t) int_0^x phi(y t) dy / sqrt(y).
double cumulative(const KernelSpec& spec, double t, double x)
{
    if (x <= 0.0) return 0.0;
    if (spec.flavor == Flavor::additive) {
        std::vector<double> bps;
        for (double k : spec.kinks) bps.push_back(k - t);
        const QuadRule r = composite_rule(0.0, x, 24, 0.5, bps);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * spec.phi(r.nodes[i] + t);
        return s;
    }
    // y = v^2 removes the 1/sqrt(y) weight.
    std::vector<double> bps;
    for (double k : spec.kinks)
        if (k > 0) bps.push_back(std::sqrt(k / t));
    const double v = std::sqrt(x);
    const QuadRule r = composite_rule(0.0, v, 24, 0.125, bps);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * spec.phi(r.nodes[i] * r.nodes[i] * t);
    return 2.0 * std::sqrt(t) * s;
}

struct Brackets {
    /// Integral of tau_t phi from the boundary to x_i (additive: the tail from x_i).
    Eigen::VectorXd partial;
    /// Outer weights: w_i (additive) or sqrt(t) w_i / sqrt(x_i).
    Eigen::VectorXd weights;
};

Brackets brackets(const KernelSpec& spec, double t, const Grid& grid)
{
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    Brackets b;
    b.partial.resize(n);
    b.weights.resize(n);
    const bool add = spec.flavor == Flavor::additive;
    const double total = add ? cumulative(spec, t, grid.truncation) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid.nodes[i];
        const double c = cumulative(spec, t, x);
        b.partial[i] = add ? total - c : c;
        b.weights[i] = add ? grid.weights[i] : std::sqrt(t) * grid.weights[i] / std::sqrt(x);
    }
    return b;
}

double perturbed_direct(const KernelSpec& spec, double t, double gamma, PerturbedKind which, const Grid& grid)
{
    const double g_det = which == PerturbedKind::F12 ? gamma * (2.0 - gamma) : gamma;
    const DiscreteOperator op = discretize(spec, t, grid);
    const double logF = log_det(op, g_det);
    const Resolvent r(op, g_det);
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i)
        f[i] = spec.phi(spec.flavor == Flavor::additive ? grid.nodes[i] + t : grid.nodes[i] * t);
    const Eigen::VectorXd u = r.solve(f);
    const Brackets b = brackets(spec, t, grid);
    double brace = 0.0;
    if (which == PerturbedKind::F4) {
        brace = 1.0 + gamma * (b.weights.array() * u.array() * 0.5 * b.partial.array()).sum();
    } else {
        brace = 1.0 - gamma * (b.weights.array() * u.array() * (1.0 - b.partial.array())).sum();
    }
    return std::exp(logF) * brace;
}

} // namespace

const char* perturbed_name(PerturbedKind which)
{
    switch (which) {
    case PerturbedKind::F11: return "F11";
    case PerturbedKind::F12: return "F12";
    case PerturbedKind::F4: return "F4";
    }
    return "?";
}

double tw_logF(const KernelSpec& spec, double t, double gamma, const GridOptions& options)
{
    check_gamma(gamma);
    if (spec.is_zero || gamma == 0.0) return 0.0;
    if (spec.flavor == Flavor::additive) {
        const auto f = [&](double v) {
            const QPair q = scaled_q(spec, t + v, gamma, options);
            return v * q.q * q.q_star;
        };
        return -walk_integral(f, 0.0, s_width(spec), s_breaks(spec, t));
    }
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative t must be positive");
    const auto f = [&](double w) {
        const QPair q = scaled_q(spec, t * std::exp(-w), gamma, options);
        return w * q.q * q.q_star;
    };
    return -walk_integral(f, 0.0, s_width(spec), s_breaks(spec, t));
}

double omega(const KernelSpec& spec, double t, double gamma, const GridOptions& options)
{
    check_gamma(gamma);
    if (spec.is_zero || gamma == 0.0) return 0.0;
    if (spec.flavor == Flavor::additive) {
        const auto f = [&](double v) { return scaled_q(spec, t + v, gamma, options).q; };
        return walk_integral(f, 0.0, s_width(spec), s_breaks(spec, t));
    }
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative t must be positive");
    const auto f = [&](double w) {
        const double s = t * std::exp(-w);
        return scaled_q(spec, s, gamma, options).q * std::sqrt(s);
    };
    return walk_integral(f, 0.0, s_width(spec), s_breaks(spec, t));
}

TWResult tw_result(const KernelSpec& spec, double t, double gamma, const GridOptions& options)
{
    check_gamma(gamma);
    TWResult out;
    out.t = t;
    out.gamma = gamma;
    if (spec.is_zero || gamma == 0.0) return out;
    const DiscreteOperator op = discretize(spec, t, default_grid(spec, t, options));
    out.logF = log_det(op, gamma);
    out.logG_plus = log_det_hankel(op, +1, std::sqrt(gamma));
    out.logG_minus = log_det_hankel(op, -1, std::sqrt(gamma));
    out.omega = omega(spec, t, gamma, options);
    return out;
}

double perturbed(const KernelSpec& spec, double t, double gamma, PerturbedKind which, PerturbedMethod method,
                 const GridOptions& options)
{
    require_symmetric(spec);
    check_gamma(gamma);
    if (spec.is_zero || gamma == 0.0) return 1.0;
    if (method == PerturbedMethod::direct)
        return perturbed_direct(spec, t, gamma, which, default_grid(spec, t, options));
    const double gc = gamma * (2.0 - gamma);
    switch (which) {
    case PerturbedKind::F11: {
        const double w = omega(spec, t, gamma, options);
        return std::exp(log_fredholm(spec, t, gamma, options)) * (std::cosh(w) - std::sqrt(gamma) * std::sinh(w));
    }
    case PerturbedKind::F12: {
        const double w = omega(spec, t, gc, options);
        const double brace = (1.0 - gamma + std::cosh(w) - std::sqrt(gc) * std::sinh(w)) / (2.0 - gamma);
        return std::exp(log_fredholm(spec, t, gc, options)) * brace;
    }
    case PerturbedKind::F4: {
        const double c = std::cosh(0.5 * omega(spec, t, gamma, options));
        return std::exp(log_fredholm(spec, t, gamma, options)) * c * c;
    }
    }
    return 0.0;
}

double perturbed_from_G(const KernelSpec& spec, double t, double gamma, PerturbedKind which,
                        const GridOptions& options)
{
    require_symmetric(spec);
    check_gamma(gamma);
    if (spec.is_zero || gamma == 0.0) return 1.0;
    const DiscreteOperator op = discretize(spec, t, default_grid(spec, t, options));
    const auto G = [&](int sign, double g) { return std::exp(log_det_hankel(op, sign, std::sqrt(g))); };
    switch (which) {
    case PerturbedKind::F11: {
        const double r = std::sqrt(gamma);
        const double gm = G(-1, gamma), gp = G(+1, gamma);
        return 0.5 * (1.0 - r) * gm * gm + 0.5 * (1.0 + r) * gp * gp;
    }
    case PerturbedKind::F12: {
        const double gc = gamma * (2.0 - gamma);
        const double r = std::sqrt(gc);
        const double c = std::sqrt((1.0 - r) / (2.0 * (2.0 - gamma))) * G(-1, gc) +
                         std::sqrt((1.0 + r) / (2.0 * (2.0 - gamma))) * G(+1, gc);
        return c * c;
    }
    case PerturbedKind::F4: {
        const double c = 0.5 * (G(-1, gamma) + G(+1, gamma));
        return c * c;
    }
    }
    return 0.0;
}

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

constexpr double kOdeTol = 1e-11;

/// Relative local tolerance kOdeTol; the absolute floor follows the seed magnitude since the
/// seeds are exponentially (resp. algebraically) small.
template <class System>
void integrate_to(System sys, State x0, double x_start, const std::vector<double>& targets,
                        const std::vector<std::size_t>& order, std::vector<State>& states)
{
    std::vector<double> times{x_start};
    for (std::size_t i : order) times.push_back(targets[i]);
    states.assign(targets.size(), State{});
    std::size_t next = 0;
    const double abs_tol = kOdeTol * std::min(1.0, std::abs(x0[0]));
    auto stepper = odeint::make_dense_output(abs_tol, kOdeTol, odeint::runge_kutta_dopri5<State>());
    const double dt = times.size() > 1 && times[1] < x_start ? -1e-3 : 1e-3;
    odeint::integrate_times(stepper, sys, x0, times.begin(), times.end(), dt, [&](const State& s, double) {
        if (next > 0) states[order[next - 1]] = s;
        ++next;
    });
}

} // namespace

double pii_residual(double t, double q, double, double d2q)
{
    return d2q - t * q - 2.0 * q * q * q;
}

double bessel_ode_residual(double alpha, double t, double q, double dq, double d2q)
{
    const double tq = t * dq;
    const double lhs = t * (q * q - 0.25) * (dq + t * d2q);
    const double rhs = q * tq * tq + (t - alpha * alpha) * q / 16.0 + t * q * q * q * (q * q - 0.5);
    return lhs - rhs;
}

OdeSamples pii_oracle(const std::vector<double>& t_grid, double t_seed)
{
    if (t_seed < 6.0) fail(ErrorCode::InvalidParam, "t_seed must be >= 6");
    for (double t : t_grid)
        if (!(t > -3.0 && t <= t_seed)) fail(ErrorCode::InvalidParam, "t grid must lie in (-3, t_seed]");
    std::vector<std::size_t> order(t_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t_grid[a] > t_grid[b]; });
    const AiryPair seed = airy_ai(t_seed);
    const auto sys = [](const State& x, State& dx, double t) {
        if (!(std::abs(x[0]) <= 1e3)) fail(ErrorCode::BlowUp, "Painleve-II solution left the bounded branch");
        dx[0] = x[1];
        dx[1] = t * x[0] + 2.0 * x[0] * x[0] * x[0];
    };
    std::vector<std::size_t> todo;
    for (std::size_t i : order)
        if (t_grid[i] < t_seed) todo.push_back(i);
    std::vector<State> states(t_grid.size(), State{seed.ai, seed.ai_prime});
    if (!todo.empty()) {
        std::vector<State> got;
        integrate_to(sys, State{seed.ai, seed.ai_prime}, t_seed, t_grid, todo, got);
        for (std::size_t i : todo) states[i] = got[i];
    }
    OdeSamples out;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        out.t.push_back(t_grid[i]);
        out.q.push_back(states[i][0]);
        out.dq.push_back(states[i][1]);
    }
    return out;
}

OdeSamples bessel_ode_oracle(double alpha, const std::vector<double>& t_grid, double t_seed)
{
    if (!(alpha > -1.0)) fail(ErrorCode::InvalidParam, "alpha must exceed -1");
    if (!(t_seed > 0.0 && t_seed <= 1e-4)) fail(ErrorCode::InvalidParam, "t_seed must lie in (0, 1e-4]");
    for (double t : t_grid)
        if (!(t >= t_seed)) fail(ErrorCode::InvalidParam, "t grid must lie above t_seed");
    // q ~ c t^{alpha/2} (1 - t / (4 (alpha + 1))), theta = t dq/dt.
    const double c = std::pow(t_seed, 0.5 * alpha) /
                     (std::pow(2.0, 1.0 + alpha) * boost::math::tgamma(1.0 + alpha));
    const double b = -1.0 / (4.0 * (alpha + 1.0));
    const double q0 = c * (1.0 + b * t_seed);
    const double th0 = c * (0.5 * alpha + (0.5 * alpha + 1.0) * b * t_seed);
    OdeSamples out;
    out.t = t_grid;
    if (alpha == 0.0) {
        // q = 1/2 solves the equation identically and matches the boundary value.
        out.q.assign(t_grid.size(), 0.5);
        out.dq.assign(t_grid.size(), 0.0);
        return out;
    }
    const auto sys = [alpha](const State& x, State& dx, double u) {
        const double t = std::exp(u);
        const double q = x[0], th = x[1];
        const double d = q * q - 0.25;
        if (std::abs(d) < 1e-6) fail(ErrorCode::SingularCoefficient, "q^2 reached 1/4");
        dx[0] = th;
        dx[1] = (q * th * th + (t - alpha * alpha) * q / 16.0 + t * q * q * q * (q * q - 0.5)) / d;
    };
    std::vector<std::size_t> order(t_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) { return t_grid[a] < t_grid[b2]; });
    std::vector<double> u_grid;
    for (double t : t_grid) u_grid.push_back(std::log(t));
    std::vector<std::size_t> todo;
    for (std::size_t i : order)
        if (t_grid[i] > t_seed) todo.push_back(i);
    std::vector<State> states(t_grid.size(), State{q0, th0});
    if (!todo.empty()) {
        std::vector<State> got;
        integrate_to(sys, State{q0, th0}, std::log(t_seed), u_grid, todo, got);
        for (std::size_t i : todo) states[i] = got[i];
    }
    out.q.clear();
    out.dq.clear();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        out.q.push_back(states[i][0]);
        out.dq.push_back(states[i][1] / t_grid[i]);
    }
    return out;
}

} // namespace hdet
