#include "hdet/quadrature.hpp"

#include "hdet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace hdet {

namespace {

QuadRule compute_gauss_legendre(int n)
{
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int k = 0; k < half; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
                p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
                p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[k] = -x;
        rule.nodes[n - 1 - k] = x;
        rule.weights[k] = w;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<double> split_interval(double a, double b, double max_width, std::vector<double> breaks)
{
    std::vector<double> cuts{a, b};
    for (double c : breaks)
        if (c > a + 1e-12 && c < b - 1e-12)
            cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out{a};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int m = std::max(1, static_cast<int>(std::ceil(len / max_width - 1e-12)));
        for (int k = 1; k <= m; ++k)
            out.push_back(k == m ? cuts[i + 1] : cuts[i] + len * k / m);
    }
    return out;
}

void fill_nodes(Grid& g)
{
    const QuadRule& r = gauss_legendre(g.order);
    g.s_nodes.clear();
    g.s_weights.clear();
    g.nodes.clear();
    g.weights.clear();
    for (std::size_t p = 0; p + 1 < g.panels.size(); ++p) {
        const double lo = g.panels[p];
        const double hi = g.panels[p + 1];
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (int k = 0; k < g.order; ++k) {
            const double s = mid + half * r.nodes[k];
            const double ws = half * r.weights[k];
            g.s_nodes.push_back(s);
            g.s_weights.push_back(ws);
            g.nodes.push_back(g.to_x(s));
            g.weights.push_back(ws * g.jacobian(s));
        }
    }
}

void check_order(int order)
{
    if (order < 1 || order > 512)
        fail(ErrorCode::SizeExceeded, "quadrature order must lie in [1, 512]");
}

} // namespace

const QuadRule& gauss_legendre(int n)
{
    check_order(n);
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<QuadRule>(compute_gauss_legendre(n))).first;
    return *it->second;
}

double Grid::to_x(double s) const
{
    switch (map) {
    case GridMap::identity: return s;
    case GridMap::power: return std::pow(s, map_power);
    case GridMap::log: return std::exp(s);
    }
    return s;
}

double Grid::to_s(double x) const
{
    switch (map) {
    case GridMap::identity: return x;
    case GridMap::power: return std::pow(x, 1.0 / map_power);
    case GridMap::log: return std::log(x);
    }
    return x;
}

double Grid::jacobian(double s) const
{
    switch (map) {
    case GridMap::identity: return 1.0;
    case GridMap::power: return map_power * std::pow(s, map_power - 1.0);
    case GridMap::log: return std::exp(s);
    }
    return 1.0;
}

Grid halfline_grid(double decay_rate, double shift, double tol, int order, const HalflineOptions& options)
{
    check_order(order);
    if (!(decay_rate > 0.0))
        fail(ErrorCode::InvalidParam, "halfline_grid: decay_rate must be positive");
    if (!(tol > 1e-16 && tol < 1e-2))
        fail(ErrorCode::InvalidParam, "halfline_grid: tol must lie in (1e-16, 1e-2)");
    if (!(options.max_width > 0.0))
        fail(ErrorCode::InvalidParam, "halfline_grid: max_width must be positive");
    const double log_target = -std::log(tol * 1e-2);
    double reach = 0.0;
    switch (options.envelope) {
    case Envelope::exponential: reach = log_target / decay_rate; break;
    case Envelope::gaussian: reach = std::sqrt(log_target / decay_rate); break;
    case Envelope::super_exponential: reach = std::pow(1.5 * log_target / decay_rate, 2.0 / 3.0); break;
    }
    double L = std::max(reach - shift, options.max_width);
    L = options.max_width * std::ceil(L / options.max_width - 1e-12);
    if (L > 200.0)
        fail(ErrorCode::TruncationFailure, "halfline_grid: truncation exceeds 200");
    Grid g;
    g.domain = DomainKind::halfline;
    g.truncation = L;
    g.order = order;
    g.panels = split_interval(0.0, L, options.max_width, options.breakpoints);
    fill_nodes(g);
    return g;
}

Grid unit_grid(int n_panels, int order, double grading)
{
    return unit_power_grid(n_panels, order, 1.0, grading);
}

Grid unit_power_grid(int n_panels, int order, double power, double grading)
{
    if (n_panels < 1 || n_panels > 64 || order < 1 || order > 64)
        fail(ErrorCode::SizeExceeded, "unit grid: n_panels and order must lie in [1, 64]");
    if (!(grading >= 1.0) || !(power >= 1.0))
        fail(ErrorCode::InvalidParam, "unit grid: grading and power must be >= 1");
    Grid g;
    g.domain = DomainKind::unit;
    g.truncation = 1.0;
    g.map = power == 1.0 ? GridMap::identity : GridMap::power;
    g.map_power = power;
    g.order = order;
    for (int k = 0; k <= n_panels; ++k)
        g.panels.push_back(std::pow(static_cast<double>(k) / n_panels, grading));
    fill_nodes(g);
    return g;
}

Grid unit_log_grid(double s_min, int order, double max_width, const std::vector<double>& breakpoints)
{
    check_order(order);
    if (!(s_min < 0.0) || !(max_width > 0.0))
        fail(ErrorCode::InvalidParam, "unit_log_grid: need s_min < 0 and max_width > 0");
    if (-s_min > 200.0)
        fail(ErrorCode::TruncationFailure, "unit_log_grid: truncation exceeds 200");
    Grid g;
    g.domain = DomainKind::unit;
    g.truncation = 1.0;
    g.map = GridMap::log;
    g.order = order;
    g.panels = split_interval(s_min, 0.0, max_width, breakpoints);
    fill_nodes(g);
    return g;
}

QuadRule composite_rule(double a, double b, int order, double max_width, const std::vector<double>& breakpoints)
{
    check_order(order);
    QuadRule out;
    if (!(b > a))
        return out;
    const QuadRule& r = gauss_legendre(order);
    const std::vector<double> cuts = split_interval(a, b, max_width, breakpoints);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double half = 0.5 * (cuts[p + 1] - cuts[p]);
        const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
        for (int k = 0; k < order; ++k) {
            out.nodes.push_back(mid + half * r.nodes[k]);
            out.weights.push_back(half * r.weights[k]);
        }
    }
    return out;
}

} // namespace hdet
