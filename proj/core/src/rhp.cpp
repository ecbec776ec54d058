#include "hdet/rhp.hpp"

#include "hdet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdet {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kContourTol = 1e-10;
constexpr double kLogCut = 40.0;

/// Power-law exponents of f(x e^v): ~e^{k0 v} as v -> -inf, decays like e^{-kinf v} as v -> +inf.
struct MellinExponents {
    double k0;
    double kinf;
    double direct_min_rate;
};

MellinExponents mellin_exponents(const KernelSpec& spec)
{
    if (spec.name == "bessel") return {spec.param("alpha", 0.0) / 2.0, 0.25, 4.0};
    if (spec.name == "mult-laplace") return {spec.decay.rate - 0.5, spec.decay.rate + 0.5, 0.05};
    fail(ErrorCode::UnsupportedKernel, "no Green function support for kernel '" + spec.name + "'");
}

double two_sided_reach(const KernelSpec& spec)
{
    const Decay& d = spec.decay;
    switch (d.kind) {
    case Envelope::gaussian: return std::sqrt(kLogCut / d.rate);
    case Envelope::super_exponential: return std::pow(1.5 * kLogCut / d.rate, 2.0 / 3.0);
    default: return kLogCut / d.rate;
    }
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double width,
               const std::vector<double>& breaks)
{
    if (!(b > a)) return 0.0;
    const QuadRule rule = composite_rule(a, b, 24, width, breaks);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
}

/// int_a^b f(v) dv with panel width shrinking as the sqrt(x e^v) phase of a Bessel profile speeds up.
cplx integrate_graded(const std::function<cplx(double)>& f, double a, double b, double base_width, double x,
                      bool bessel)
{
    const QuadRule& r = gauss_legendre(24);
    cplx sum = 0.0;
    double lo = a;
    while (lo < b) {
        double w = base_width;
        if (bessel) w = std::min(w, 6.0 / (1.0 + 0.5 * std::sqrt(x * std::exp(std::min(lo + w, b)))));
        const double hi = std::min(b, lo + w);
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (std::size_t k = 0; k < r.nodes.size(); ++k) sum += half * r.weights[k] * f(mid + half * r.nodes[k]);
        lo = hi;
    }
    return sum;
}

GreenPair green_additive(const KernelSpec& spec, cplx z, double x)
{
    const double im = z.imag();
    const double width = std::min(1.0, 8.0 / (1.0 + std::abs(z.real())));
    const double reach_z = std::min(kLogCut / std::abs(im), 1e300);
    const double right = spec.one_sided ? std::pow(1.5 * kLogCut / spec.decay.rate, 2.0 / 3.0) : two_sided_reach(spec);
    double left = spec.one_sided ? 1e300 : right;
    if (spec.one_sided && reach_z > 200.0)
        fail(ErrorCode::UnsupportedKernel, "one-sided kernel too close to the contour");
    const std::vector<double>& breaks = spec.kinks;
    const auto below = [&](const Profile& f, cplx sgn) {
        const double lo = std::max(x - reach_z, -left);
        return integrate([&](double s) { return std::exp(sgn * kI * z * (x - s)) * f(0, s); }, lo, x, width, breaks);
    };
    const auto above = [&](const Profile& f, cplx sgn) {
        const double hi = std::min(x + reach_z, right);
        return integrate([&](double s) { return std::exp(sgn * kI * z * (x - s)) * f(0, s); }, x, hi, width, breaks);
    };
    if (im > 0) return {below(spec.phi_profile, 1.0), -above(spec.psi_profile, -1.0)};
    return {-above(spec.phi_profile, 1.0), below(spec.psi_profile, -1.0)};
}

/// int_{-inf}^0 e^{c v} f(x e^v) dv, convergent when Re c + k0 > 0.
cplx mellin_lower(const KernelSpec& spec, const Profile& f, cplx c, double x, const MellinExponents& e)
{
    const double rate = c.real() + e.k0;
    const double L = std::min(kLogCut / rate, 400.0);
    const double width = std::min(1.0, 8.0 / (1.0 + std::abs(c.imag())));
    std::vector<double> breaks;
    for (double k : spec.kinks)
        if (k < x) breaks.push_back(std::log(k / x));
    return integrate([&](double v) { return std::exp(c * v) * f(0, x * std::exp(v)); }, -L, 0.0, width, breaks);
}

/// int_0^inf e^{c v} f(x e^v) dv, convergent when kinf - Re c > 0.
cplx mellin_upper(const KernelSpec& spec, const Profile& f, cplx c, double x, const MellinExponents& e)
{
    const double rate = e.kinf - c.real();
    const double L = std::min(kLogCut / rate, 400.0);
    const double width = std::min(1.0, 8.0 / (1.0 + std::abs(c.imag())));
    if (!spec.kinks.empty()) {
        std::vector<double> breaks;
        for (double k : spec.kinks)
            if (k > x) breaks.push_back(std::log(k / x));
        return integrate([&](double v) { return std::exp(c * v) * f(0, x * std::exp(v)); }, 0.0, L, width, breaks);
    }
    return integrate_graded([&](double v) { return std::exp(c * v) * f(0, x * std::exp(v)); }, 0.0, L, width, x,
                            spec.name == "bessel");
}

GreenPair green_multiplicative(const KernelSpec& spec, cplx z, double x)
{
    const MellinExponents e = mellin_exponents(spec);
    constexpr double margin = 0.05;
    GreenPair out;
    const bool right = z.real() > 0.5;
    if (right) {
        out.y1 = mellin_lower(spec, spec.phi_profile, z, x, e);
    } else if (z.real() + e.k0 > margin) {
        const ReflectionPair r = reflection_coefficients(spec, z);
        out.y1 = mellin_lower(spec, spec.phi_profile, z, x, e) - std::exp(-z * std::log(x)) * r.r1;
    } else if (e.kinf - z.real() >= e.direct_min_rate) {
        out.y1 = -mellin_upper(spec, spec.phi_profile, z, x, e);
    } else {
        fail(ErrorCode::StripViolation, "Green function y1 not available at this z");
    }
    const cplx c = 1.0 - z;
    if (!right) {
        out.y2 = mellin_lower(spec, spec.psi_profile, c, x, e);
    } else if (c.real() + e.k0 > margin) {
        const ReflectionPair r = reflection_coefficients(spec, z);
        out.y2 = mellin_lower(spec, spec.psi_profile, c, x, e) - std::exp((z - 1.0) * std::log(x)) * r.r2;
    } else if (e.kinf - c.real() >= e.direct_min_rate) {
        out.y2 = -mellin_upper(spec, spec.psi_profile, c, x, e);
    } else {
        fail(ErrorCode::StripViolation, "Green function y2 not available at this z");
    }
    return out;
}

Eigen::VectorXcd solve_complex(const Resolvent& r, const Eigen::VectorXcd& f)
{
    Eigen::MatrixXd rhs(f.size(), 2);
    rhs.col(0) = f.real();
    rhs.col(1) = f.imag();
    const Eigen::MatrixXd u = r.solve(rhs);
    return u.col(0).cast<cplx>() + kI * u.col(1).cast<cplx>();
}

/// Neville extrapolation of samples f(d_k) to d = 0.
Matrix2c extrapolate(const std::vector<double>& d, std::vector<Matrix2c> f)
{
    const std::size_t n = d.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) f[i] = (d[i + m] * f[i] - d[i] * f[i + 1]) / (d[i + m] - d[i]);
    return f[0];
}

} // namespace

GreenPair green_y(const KernelSpec& spec, cplx z, double x)
{
    if (spec.flavor == Flavor::additive) {
        if (std::abs(z.imag()) < kContourTol) fail(ErrorCode::OnContour, "z lies on the real axis");
        if (spec.is_zero) return {0.0, 0.0};
        return green_additive(spec, z, x);
    }
    if (std::abs(z.real() - 0.5) < kContourTol) fail(ErrorCode::OnContour, "z lies on 1/2 + iR");
    if (!(x > 0)) fail(ErrorCode::InvalidParam, "multiplicative Green functions need x > 0");
    if (spec.is_zero) return {0.0, 0.0};
    return green_multiplicative(spec, z, x);
}

cplx contour_point(Flavor flavor, double u)
{
    return flavor == Flavor::additive ? cplx(u, 0.0) : cplx(0.5, u);
}

RHSample assemble_X(const KernelSpec& spec, double t, cplx z, const Grid& grid)
{
    RHSample s;
    s.z = z;
    s.t = t;
    s.flavor = spec.flavor;
    s.X = Matrix2c::Identity();
    const bool add = spec.flavor == Flavor::additive;
    if (add ? std::abs(z.imag()) < kContourTol : std::abs(z.real() - 0.5) < kContourTol)
        fail(ErrorCode::OnContour, "z lies on the contour");
    if (spec.is_zero) return s;
    const DiscreteOperator op = discretize(spec, t, grid);
    const Resolvent r(op, 1.0);
    const Resolvent rs(op, 1.0, true);
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const auto arg = [&](double x) { return add ? x + t : x * t; };
    Eigen::VectorXcd y1(n), y2(n);
    Eigen::VectorXd phi(n), psi(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = arg(grid.nodes[i]);
        const GreenPair g = green_y(spec, z, x);
        y1[i] = g.y1;
        y2[i] = g.y2;
        phi[i] = spec.phi(x);
        psi[i] = spec.psi(x);
        w[i] = grid.weights[i];
    }
    const double x0 = add ? 0.0 : 1.0;
    const GreenPair g0 = green_y(spec, z, arg(x0));
    const Eigen::VectorXd u_phi = r.solve(phi);
    const Eigen::VectorXd u_psi = rs.solve(psi);
    const Eigen::VectorXcd v1 = solve_complex(r, y1);
    const Eigen::VectorXcd v2 = solve_complex(rs, y2);
    cplx pair1 = 0.0, pair2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        pair1 += w[i] * u_psi[i] * y1[i];
        pair2 += w[i] * u_phi[i] * y2[i];
    }
    const Eigen::RowVectorXd e = r.extend_row(x0);
    const Eigen::RowVectorXd es = rs.extend_row(x0);
    const cplx b1 = g0.y1 + (e.cast<cplx>() * v1)(0);
    const cplx b2 = g0.y2 + (es.cast<cplx>() * v2)(0);
    if (add) {
        s.X(0, 0) = 1.0 - pair1;
        s.X(0, 1) = kI * b2;
        s.X(1, 0) = -kI * b1;
        s.X(1, 1) = 1.0 - pair2;
    } else {
        s.X(0, 0) = 1.0 + t * pair1;
        s.X(0, 1) = -t * b2;
        s.X(1, 0) = -b1;
        s.X(1, 1) = 1.0 + t * pair2;
    }
    return s;
}

Matrix2c jump_matrix(const KernelSpec& spec, double t, cplx z)
{
    const ReflectionPair r = reflection_coefficients(spec, z);
    Matrix2c J;
    if (spec.flavor == Flavor::additive) {
        J << 1.0 - r.r1 * r.r2, -r.r2 * std::exp(-kI * t * z), r.r1 * std::exp(kI * t * z), 1.0;
    } else {
        const double lt = std::log(t);
        J << 1.0 - r.r1 * r.r2, -r.r2 * std::exp(z * lt), r.r1 * std::exp(-z * lt), 1.0;
    }
    return J;
}

double jump_defect(const KernelSpec& spec, double t, double u, const std::vector<double>& deltas, const Grid& grid)
{
    if (deltas.empty()) fail(ErrorCode::InvalidParam, "jump_defect needs at least one delta");
    for (std::size_t k = 0; k < deltas.size(); ++k)
        if (!(deltas[k] > 0) || (k > 0 && !(deltas[k] < deltas[k - 1])))
            fail(ErrorCode::InvalidParam, "deltas must be positive and decreasing");
    const cplx z = contour_point(spec.flavor, u);
    const Matrix2c J = jump_matrix(spec, t, z);
    if (spec.is_zero) return 0.0;
    const cplx plus_dir = spec.flavor == Flavor::additive ? kI : cplx(-1.0);
    std::vector<Matrix2c> plus, minus;
    for (double d : deltas) {
        plus.push_back(assemble_X(spec, t, z + d * plus_dir, grid).X);
        minus.push_back(assemble_X(spec, t, z - d * plus_dir, grid).X);
    }
    const Matrix2c xp = extrapolate(deltas, plus);
    const Matrix2c xm = extrapolate(deltas, minus);
    return (xp - xm * J).cwiseAbs().maxCoeff();
}

Matrix2c x1_coefficient(const KernelSpec& spec, double t, const std::vector<double>& probe_radii, const Grid& grid)
{
    if (probe_radii.empty()) fail(ErrorCode::InvalidParam, "x1_coefficient needs probe radii");
    for (double r : probe_radii)
        if (!(r >= 20.0)) fail(ErrorCode::InvalidParam, "probe radii must be >= 20");
    if (spec.is_zero) return Matrix2c::Zero();
    const bool add = spec.flavor == Flavor::additive;
    const double pi = std::numbers::pi;
    const std::vector<double> angles = add ? std::vector<double>{pi / 4, 3 * pi / 4} : std::vector<double>{pi / 4, -pi / 4};
    std::vector<cplx> zs;
    std::vector<Matrix2c> vals;
    for (double r : probe_radii)
        for (double a : angles) {
            const cplx z = (add ? 0.0 : 0.5) + std::polar(r, a);
            zs.push_back(z);
            vals.push_back(z * (assemble_X(spec, t, z, grid).X - Matrix2c::Identity()));
        }
    const Eigen::Index m = static_cast<Eigen::Index>(zs.size());
    const Eigen::Index terms = std::min<Eigen::Index>(5, m);
    Eigen::MatrixXcd B(m, terms);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index k = 0; k < terms; ++k) B(i, k) = std::pow(zs[i], -static_cast<double>(k));
    const auto qr = B.colPivHouseholderQr();
    Matrix2c out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Eigen::VectorXcd rhs(m);
            for (Eigen::Index i = 0; i < m; ++i) rhs[i] = vals[i](a, b);
            out(a, b) = qr.solve(rhs)[0];
        }
    return out;
}

Matrix2c x1_prediction(const KernelSpec& spec, double t, const Grid& grid)
{
    const EdgeSample e = edge_sample(spec, t, 1.0, 0, grid);
    Matrix2c m;
    if (spec.flavor == Flavor::additive)
        m << -kI * e.p[0], e.q_star[0], e.q[0], kI * e.p_star[0];
    else
        m << e.p[0], e.q_star[0], -e.q[0], -e.p_star[0];
    return m;
}

} // namespace hdet
