#include "hdet/fredholm.hpp"

#include "hdet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hdet {

namespace {

double hankel_value(const KernelSpec& spec, double t, double x, double y, bool psi)
{
    return psi ? eval_hankel_kernel_psi(spec, t, x, y) : eval_hankel_kernel(spec, t, x, y);
}

/// Kink locations of y -> H(x, y) in the grid's panel variable.
std::vector<double> kink_points(const KernelSpec& spec, double t, const Grid& g, double x)
{
    std::vector<double> out;
    for (double k : spec.kinks) {
        const double y = spec.flavor == Flavor::additive ? k - t - x : k / (t * x);
        if (y > 0 && y < g.domain_length()) out.push_back(g.to_s(y));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> barycentric_weights(const double* nodes, int n)
{
    std::vector<double> lam(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m)
            if (m != j) lam[j] *= nodes[j] - nodes[m];
        lam[j] = 1.0 / lam[j];
    }
    return lam;
}

/// Row of product-integration weights: out[k] approximates int H(x, y) l_k(y) dy.
void fill_row(const KernelSpec& spec, double t, const Grid& g, double x, bool psi, double* out)
{
    const std::vector<double> kinks = spec.kinks.empty() ? std::vector<double>{} : kink_points(spec, t, g, x);
    const int order = g.order;
    const std::size_t panels = g.panel_count();
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = g.panels[p];
        const double hi = g.panels[p + 1];
        const double eps = 1e-12 * (hi - lo);
        std::vector<double> cuts{lo};
        for (double s : kinks)
            if (s > lo + eps && s < hi - eps) cuts.push_back(s);
        const std::size_t base = p * order;
        if (cuts.size() == 1) {
            for (int k = 0; k < order; ++k)
                out[base + k] = g.weights[base + k] * hankel_value(spec, t, x, g.nodes[base + k], psi);
            continue;
        }
        cuts.push_back(hi);
        const double* nodes = &g.s_nodes[base];
        const std::vector<double> lam = barycentric_weights(nodes, order);
        const QuadRule& sub = gauss_legendre(std::min(2 * order, 64));
        for (int k = 0; k < order; ++k) out[base + k] = 0.0;
        std::vector<double> ratio(order);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double half = 0.5 * (cuts[c + 1] - cuts[c]);
            const double mid = 0.5 * (cuts[c + 1] + cuts[c]);
            for (std::size_t m = 0; m < sub.nodes.size(); ++m) {
                const double s = mid + half * sub.nodes[m];
                const double val = half * sub.weights[m] * g.jacobian(s) * hankel_value(spec, t, x, g.to_x(s), psi);
                double denom = 0.0;
                int hit = -1;
                for (int k = 0; k < order; ++k) {
                    const double d = s - nodes[k];
                    if (d == 0.0) {
                        hit = k;
                        break;
                    }
                    ratio[k] = lam[k] / d;
                    denom += ratio[k];
                }
                if (hit >= 0) {
                    out[base + hit] += val;
                    continue;
                }
                for (int k = 0; k < order; ++k) out[base + k] += val * ratio[k] / denom;
            }
        }
    }
}

double trace_of_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    long double sum = 0.0L;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) sum += static_cast<long double>(a(i, k)) * b(k, i);
    return static_cast<double>(sum);
}

/// Matrix entering the determinant: W^{1/2} H W^{1/2} when symmetrized, A otherwise.
Eigen::MatrixXd det_matrix(const DiscreteOperator& op, bool psi)
{
    if (!op.symmetrized) return psi ? op.A_psi : op.A;
    const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(op.grid.weights.data(), op.size()).cwiseSqrt();
    return r.asDiagonal() * (psi ? op.H_psi : op.H) * r.asDiagonal();
}

double lu_log_det(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0) return 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::MatrixXd& u = lu.matrixLU();
    double sum = 0.0;
    int sign = lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double d = u(i, i);
        if (d < 0) sign = -sign;
        sum += std::log(std::abs(d));
    }
    if (!std::isfinite(sum) || sign <= 0 || sum <= std::log(1e-12))
        fail(ErrorCode::NearSingular, "determinant not bounded away from zero");
    return sum;
}

} // namespace

Grid default_grid(const KernelSpec& spec, double t, const GridOptions& options)
{
    if (spec.flavor == Flavor::additive) {
        HalflineOptions h;
        h.envelope = spec.is_zero ? Envelope::gaussian : spec.decay.kind;
        const bool exponential = h.envelope == Envelope::exponential;
        h.max_width = options.max_width > 0 ? options.max_width : (exponential ? 1.0 : 2.0);
        for (double k : spec.kinks)
            if (k - t > 0) h.breakpoints.push_back(k - t);
        const int order = options.order > 0 ? options.order : (exponential ? 16 : 20);
        return halfline_grid(spec.decay.rate, t, options.tol, order, h);
    }
    if (!(t > 0)) fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    if (spec.kinks.empty()) {
        const int panels =
            options.panels > 0 ? options.panels : std::min(64, std::max(4, static_cast<int>(std::ceil(std::sqrt(t) / 2))));
        const double grading = options.grading > 0 ? options.grading : (spec.param("alpha", 0.0) < 0 ? 3.0 : 1.0);
        const int order = options.order > 0 ? options.order : 16;
        return unit_power_grid(panels, order, 2.0, grading);
    }
    const double reach = -std::log(options.tol * 1e-2) / spec.decay.rate;
    const double s_min = std::min(-std::log(t), 0.0) - reach;
    std::vector<double> bp;
    for (double k : spec.kinks)
        if (std::log(k / t) < 0) bp.push_back(std::log(k / t));
    const int order = options.order > 0 ? options.order : 16;
    const double width = options.max_width > 0 ? options.max_width : 1.0;
    return unit_log_grid(s_min, order, width, bp);
}

Eigen::MatrixXd DiscreteOperator::K() const
{
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), size());
    return H * w.asDiagonal() * H_psi;
}

Eigen::RowVectorXd DiscreteOperator::extension_row(double x, bool psi) const
{
    Eigen::RowVectorXd row(size());
    fill_row(spec, t, grid, x, psi, row.data());
    return row;
}

DiscreteOperator discretize(const KernelSpec& spec, double t, const Grid& grid)
{
    const bool unit = grid.domain == DomainKind::unit;
    if (unit != (spec.flavor == Flavor::multiplicative))
        fail(ErrorCode::FlavorDomain, "grid does not match the kernel flavor");
    if (spec.flavor == Flavor::multiplicative && !(t > 0))
        fail(ErrorCode::FlavorDomain, "multiplicative kernels need t > 0");
    DiscreteOperator op;
    op.spec = spec;
    op.grid = grid;
    op.t = t;
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    op.H.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) op.H(i, j) = op.H(j, i) = eval_hankel_kernel(spec, t, grid.nodes[i], grid.nodes[j]);
    if (spec.symmetric) {
        op.H_psi = op.H;
    } else {
        op.H_psi.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j)
                op.H_psi(i, j) = op.H_psi(j, i) = eval_hankel_kernel_psi(spec, t, grid.nodes[i], grid.nodes[j]);
    }
    op.symmetrized = spec.kinks.empty();
    if (op.symmetrized) {
        const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), n);
        op.A = op.H * w.asDiagonal();
        op.A_psi = op.H_psi * w.asDiagonal();
        return op;
    }
    op.A.resize(n, n);
    Eigen::RowVectorXd row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        fill_row(spec, t, grid, grid.nodes[i], false, row.data());
        op.A.row(i) = row;
    }
    if (spec.symmetric) {
        op.A_psi = op.A;
    } else {
        op.A_psi.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            fill_row(spec, t, grid, grid.nodes[i], true, row.data());
            op.A_psi.row(i) = row;
        }
    }
    op.trace_K = composition_trace(spec, t);
    op.trace_H = hankel_trace(spec, t);
    return op;
}

double log_det(const DiscreteOperator& op, double gamma)
{
    if (gamma == 0.0 || op.size() == 0) return 0.0;
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    double correction = 0.0;
    if (!op.symmetrized) correction = -gamma * (op.trace_K - trace_of_product(op.A, op.A_psi));
    if (op.spec.symmetric && gamma > 0 && n > 1200) {
        const Eigen::MatrixXd a = det_matrix(op, false);
        const double r = std::sqrt(gamma);
        return lu_log_det(id - r * a) + lu_log_det(id + r * a) + correction;
    }
    const Eigen::MatrixXd m = id - gamma * det_matrix(op, false) * det_matrix(op, true);
    return lu_log_det(m) + correction;
}

double log_det_hankel(const DiscreteOperator& op, int sign, double strength)
{
    if (sign != 1 && sign != -1) fail(ErrorCode::InvalidParam, "hankel sign must be +1 or -1");
    if (strength == 0.0 || op.size() == 0) return 0.0;
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const double c = sign * strength;
    double correction = 0.0;
    if (!op.symmetrized) {
        correction = -c * (op.trace_H - op.A.trace()) -
                     0.5 * strength * strength * (op.trace_K - trace_of_product(op.A, op.A_psi));
    }
    return lu_log_det(Eigen::MatrixXd::Identity(n, n) - c * det_matrix(op, false)) + correction;
}

double log_fredholm(const KernelSpec& spec, double t, double gamma, const GridOptions& options)
{
    if (spec.is_zero || gamma == 0.0) return 0.0;
    return log_det(discretize(spec, t, default_grid(spec, t, options)), gamma);
}

Resolvent::Resolvent(const DiscreteOperator& op, double gamma, bool adjoint)
    : op_(&op), gamma_(gamma), adjoint_(adjoint)
{
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const Eigen::MatrixXd k = adjoint ? Eigen::MatrixXd(op.A_psi * op.A) : Eigen::MatrixXd(op.A * op.A_psi);
    lu_.compute(Eigen::MatrixXd::Identity(n, n) - gamma * k);
    const Eigen::MatrixXd& u = lu_.matrixLU();
    double umax = 0.0, umin = INFINITY;
    for (Eigen::Index i = 0; i < n; ++i) {
        umax = std::max(umax, std::abs(u(i, i)));
        umin = std::min(umin, std::abs(u(i, i)));
    }
    if (n > 0 && !(umin > 1e-10 * std::max(umax, 1.0)))
        fail(ErrorCode::NearSingular, "I - gamma K is numerically singular");
}

Eigen::VectorXd Resolvent::solve(const Eigen::VectorXd& f) const
{
    return lu_.solve(f);
}

Eigen::MatrixXd Resolvent::solve(const Eigen::MatrixXd& f) const
{
    return lu_.solve(f);
}

Eigen::RowVectorXd Resolvent::extend_row(double x) const
{
    const DiscreteOperator& op = *op_;
    return gamma_ * op.extension_row(x, adjoint_) * (adjoint_ ? op.A : op.A_psi);
}

double Resolvent::extend(double x, double f_at_x, const Eigen::VectorXd& u) const
{
    return f_at_x + extend_row(x).dot(u);
}

ResolventResult resolvent_apply(const DiscreteOperator& op, double gamma, const Eigen::VectorXd& f,
                                std::optional<std::pair<double, double>> eval_at, bool adjoint)
{
    const Resolvent r(op, gamma, adjoint);
    ResolventResult out;
    out.u = r.solve(f);
    if (eval_at) out.boundary = r.extend(eval_at->first, eval_at->second, out.u);
    return out;
}

double fd_derivative(const std::function<double(double)>& f, double t, double h)
{
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

double fd_second(const std::function<double(double)>& f, double t, double h)
{
    return (-f(t - 2 * h) + 16 * f(t - h) - 30 * f(t) + 16 * f(t + h) - f(t + 2 * h)) / (12 * h * h);
}

double resolvent_symmetry_defect(const KernelSpec& spec, double t, double a, double x, double gamma,
                                 const GridOptions& options)
{
    const bool add = spec.flavor == Flavor::additive;
    const auto in_domain = [add](double v) { return add ? v >= 0 : (v > 0 && v <= 1); };
    if (!in_domain(a) || !in_domain(x)) fail(ErrorCode::InvalidParam, "a and x must lie in the operator domain");
    if (a == x || spec.is_zero) return 0.0;
    const DiscreteOperator op = discretize(spec, t, default_grid(spec, t, options));
    const Resolvent r(op, gamma);
    const auto shifted = [&](double c, double y) { return add ? spec.phi(y + t + c) : spec.phi(y * t * c); };
    const auto side = [&](double c, double at) {
        Eigen::VectorXd f(op.size());
        for (std::size_t i = 0; i < op.size(); ++i) f[i] = shifted(c, op.grid.nodes[i]);
        return r.extend(at, shifted(c, at), r.solve(f));
    };
    return std::abs(side(a, x) - side(x, a));
}

} // namespace hdet
