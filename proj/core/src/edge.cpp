#include "hdet/errors.hpp"
#include "hdet/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdet {

namespace {

/// (DM)^n g = sum_k binom(n, k) (MD)^k g.
double dm_power(const KernelSpec& spec, int n, double x)
{
    switch (n) {
    case 0: return spec.psi_profile(0, x);
    case 1: return spec.psi_profile(0, x) + spec.psi_profile(1, x);
    default: return spec.psi_profile(0, x) + 2.0 * spec.psi_profile(1, x) + spec.psi_profile(2, x);
    }
}

struct Scaled {
    std::vector<double> q, p, qs, ps;
};

Scaled scale(const EdgeSample& s, double gamma)
{
    const double r = std::sqrt(gamma);
    Scaled out;
    for (double v : s.q) out.q.push_back(r * v);
    for (double v : s.p) out.p.push_back(gamma * v);
    for (double v : s.q_star) out.qs.push_back(r * v);
    for (double v : s.p_star) out.ps.push_back(gamma * v);
    return out;
}

void check_depth(int N)
{
    if (N < 0 || N > 2) fail(ErrorCode::InvalidOrder, "edge functions support 0 <= N <= 2");
}

} // namespace

double EdgeFunctions::q_gamma(std::size_t i) const
{
    return std::sqrt(gamma) * q[0][i];
}

EdgeSample edge_sample(const KernelSpec& spec, double t, double gamma, int N, const Grid& grid)
{
    check_depth(N);
    EdgeSample out;
    out.q.assign(N + 1, 0.0);
    out.p = out.q_star = out.p_star = out.q;
    if (spec.is_zero) return out;
    const DiscreteOperator op = discretize(spec, t, grid);
    const Resolvent r(op, gamma);
    const Resolvent rs(op, gamma, true);
    const bool add = spec.flavor == Flavor::additive;
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const double x0 = add ? 0.0 : 1.0;
    const double pre = add ? 1.0 : t;
    const auto arg = [&](double x) { return add ? x + t : x * t; };
    Eigen::VectorXd phi_w(n), psi_w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double y = arg(grid.nodes[i]);
        phi_w[i] = grid.weights[i] * spec.phi(y);
        psi_w[i] = grid.weights[i] * spec.psi(y);
    }
    Eigen::MatrixXd f(n, N + 1), g(n, N + 1);
    for (int k = 0; k <= N; ++k)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double y = arg(grid.nodes[i]);
            f(i, k) = spec.phi_profile(k, y);
            g(i, k) = add ? spec.psi_profile(k, y) : dm_power(spec, k, y);
        }
    const Eigen::MatrixXd u = r.solve(f);
    const Eigen::MatrixXd us = rs.solve(g);
    const Eigen::RowVectorXd ext = r.extend_row(x0);
    const Eigen::RowVectorXd ext_s = rs.extend_row(x0);
    for (int k = 0; k <= N; ++k) {
        const double y0 = arg(x0);
        const double f0 = spec.phi_profile(k, y0);
        const double g0 = add ? spec.psi_profile(k, y0) : dm_power(spec, k, y0);
        out.q[k] = f0 + ext.dot(u.col(k));
        out.q_star[k] = pre * (g0 + ext_s.dot(us.col(k)));
        out.p[k] = pre * psi_w.dot(u.col(k));
        out.p_star[k] = pre * phi_w.dot(us.col(k));
    }
    return out;
}

EdgeFunctions edge_functions(const KernelSpec& spec, const std::vector<double>& t_grid, double gamma, int N,
                             const GridOptions& options)
{
    check_depth(N);
    EdgeFunctions ef;
    ef.flavor = spec.flavor;
    ef.t_grid = t_grid;
    ef.N = N;
    ef.gamma = gamma;
    ef.q.assign(N + 1, std::vector<double>(t_grid.size(), 0.0));
    ef.p = ef.q_star = ef.p_star = ef.q;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        EdgeSample s;
        try {
            s = edge_sample(spec, t_grid[i], gamma, N, default_grid(spec, t_grid[i], options));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NearSingular) throw;
            fail(ErrorCode::NearSingular, "near-singular operator at t index " + std::to_string(i));
        }
        for (int k = 0; k <= N; ++k) {
            ef.q[k][i] = s.q[k];
            ef.p[k][i] = s.p[k];
            ef.q_star[k][i] = s.q_star[k];
            ef.p_star[k][i] = s.p_star[k];
        }
    }
    return ef;
}

double ZsResidual::max() const
{
    return std::max({dq, dp, dq_star, dp_star});
}

ZsResidual zs_residual(const KernelSpec& spec, const EdgeFunctions& ef, double fd_step, const GridOptions& options)
{
    if (ef.N < 1) fail(ErrorCode::InsufficientDepth, "the flow equations need N >= 1");
    if (!(fd_step > 0)) fail(ErrorCode::InvalidParam, "fd_step must be positive");
    ZsResidual res;
    if (spec.is_zero) return res;
    const bool add = ef.flavor == Flavor::additive;
    const double h = fd_step;
    const int N = ef.N;
    for (double t : ef.t_grid) {
        const Grid grid = default_grid(spec, add ? t - 2 * h : t * std::exp(-2 * h), options);
        std::vector<Scaled> st;
        for (int k = -2; k <= 2; ++k) {
            const double tk = add ? t + k * h : t * std::exp(k * h);
            st.push_back(scale(edge_sample(spec, tk, ef.gamma, N, grid), ef.gamma));
        }
        const Scaled& c = st[2];
        const auto d = [&](auto member, int n) {
            const auto v = [&](int k) { return (st[k].*member)[n]; };
            return (v(0) - 8 * v(1) + 8 * v(3) - v(4)) / (12 * h);
        };
        const double sgn = add ? -1.0 : 1.0;
        for (int n = 0; n < N; ++n) {
            res.dq = std::max(res.dq, std::abs(d(&Scaled::q, n) - (c.q[n + 1] + sgn * c.q[0] * c.p[n])));
            res.dp = std::max(res.dp, std::abs(d(&Scaled::p, n) - sgn * c.qs[0] * c.q[n]));
            res.dq_star = std::max(res.dq_star, std::abs(d(&Scaled::qs, n) - (c.qs[n + 1] + sgn * c.qs[0] * c.ps[n])));
            res.dp_star = std::max(res.dp_star, std::abs(d(&Scaled::ps, n) - sgn * c.q[0] * c.qs[n]));
        }
    }
    return res;
}

InvariantSeries conserved_invariant(const EdgeFunctions& ef, int n, std::optional<InvariantSign> sign)
{
    if (n < 0 || ef.N < n + 1) fail(ErrorCode::InsufficientDepth, "I_n needs edge functions up to n + 1");
    const double s = sign ? (*sign == InvariantSign::plus ? 1.0 : -1.0) : (ef.flavor == Flavor::additive ? 1.0 : -1.0);
    const double g = ef.gamma;
    const double r = std::sqrt(g);
    InvariantSeries out;
    for (std::size_t i = 0; i < ef.t_grid.size(); ++i) {
        const auto Q = [&](int k) { return r * ef.q[k][i]; };
        const auto P = [&](int k) { return g * ef.p[k][i]; };
        const auto Qs = [&](int k) { return r * ef.q_star[k][i]; };
        const auto Ps = [&](int k) { return g * ef.p_star[k][i]; };
        double sum = 0.0;
        for (int k = 0; k <= n; ++k) sum += (k % 2 ? -1.0 : 1.0) * (Qs(k) * Q(n - k) - Ps(k) * P(n - k));
        out.values.push_back(P(n + 1) + (n % 2 ? -1.0 : 1.0) * Ps(n + 1) + s * sum);
    }
    if (!out.values.empty()) {
        const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
        out.drift = *hi - *lo;
    }
    return out;
}

} // namespace hdet
