#pragma once

#include <cstddef>
#include <vector>

namespace hdet {

/// Gauss-Legendre rule on [-1, 1].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, 1 <= n <= 512 (SizeExceeded otherwise). Cached.
const QuadRule& gauss_legendre(int n);

enum class DomainKind { halfline, unit };

/// Relation between the panel variable s and the native variable x.
enum class GridMap {
    identity, ///< x = s
    power,    ///< x = s^p on the unit interval
    log       ///< x = e^s, s <= 0, on the unit interval
};

enum class Envelope { exponential, gaussian, super_exponential };

/// Composite Gauss-Legendre grid. Panels live in the map variable s; nodes and
/// weights are reported in the native variable x with the Jacobian folded in.
struct Grid {
    DomainKind domain = DomainKind::halfline;
    double truncation = 0.0;
    GridMap map = GridMap::identity;
    double map_power = 1.0;
    int order = 0;
    std::vector<double> panels;
    std::vector<double> s_nodes;
    std::vector<double> s_weights;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    std::size_t panel_count() const { return panels.empty() ? 0 : panels.size() - 1; }
    double to_x(double s) const;
    double to_s(double x) const;
    double jacobian(double s) const;
    double domain_length() const { return domain == DomainKind::unit ? 1.0 : truncation; }
};

struct HalflineOptions {
    Envelope envelope = Envelope::exponential;
    double max_width = 2.0;
    std::vector<double> breakpoints;
};

/// Grid on [0, L] with L chosen so the envelope at x + shift is <= tol * 1e-2,
/// rounded up to a whole number of panels. TruncationFailure if L > 200.
Grid halfline_grid(double decay_rate, double shift, double tol, int order,
                   const HalflineOptions& options = {});

/// Unit-interval grid with panel boundaries (k / n_panels)^grading.
Grid unit_grid(int n_panels, int order, double grading);

/// Unit-interval grid in s with x = s^power; panel boundaries (k / n_panels)^grading in s.
Grid unit_power_grid(int n_panels, int order, double power, double grading);

/// Unit-interval grid in s = ln x over [s_min, 0]; panels of width <= max_width
/// split at the given breakpoints.
Grid unit_log_grid(double s_min, int order, double max_width,
                   const std::vector<double>& breakpoints = {});

/// Plain composite rule on [a, b]: panels of width <= max_width split at breakpoints.
QuadRule composite_rule(double a, double b, int order, double max_width,
                        const std::vector<double>& breakpoints = {});

} // namespace hdet
