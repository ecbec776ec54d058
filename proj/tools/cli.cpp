#include "cli.hpp"

#include "acceptance.hpp"

#include "hdet/akhiezer_kac.hpp"
#include "hdet/errors.hpp"
#include "hdet/fredholm.hpp"
#include "hdet/tracy_widom.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

namespace hdet::cli {

using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
    json diagnostics = json::object();
};

struct Settings {
    std::string kernel = "gaussian";
    std::vector<std::string> params;
    std::string t;
    std::string gamma = "1";
    int order = 0;
    int panels = 0;
    double grading = 0.0;
    double max_width = 0.0;
    double tol = 1e-15;
    std::string format = "csv";
    std::string output;
    int N = 0;
    double fd_step = 1e-3;
    std::string kinds = "F11,F12,F4";
    std::string u = "-2:2:5";
    double contour_scale = 1.0;
    std::string only = "1-15";

    GridOptions grid() const { return {order, max_width, panels, grading, tol}; }
    bool grid_overridden() const { return order || panels || grading != 0.0 || max_width != 0.0; }
};

/// Per-row failures that do not abort the sweep.
struct RowErrors {
    std::mutex mutex;
    std::vector<std::pair<std::size_t, std::string>> numerical;
    std::exception_ptr usage;
};

std::string number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return number(*d);
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

json json_cell(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    return std::get<std::string>(c);
}

json complex_matrix(const Matrix2c& m)
{
    json out = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        out.push_back(row);
    }
    return out;
}

unsigned env_threads()
{
    if (const char* s = std::getenv("HDET_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates rows in parallel; results land in input order.
std::vector<Row> sweep(std::size_t n, std::size_t width, const std::function<Row(std::size_t)>& body,
                       RowErrors& errors)
{
    std::vector<Row> rows(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                rows[i] = body(i);
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(errors.mutex);
                if (e.is_usage()) {
                    if (!errors.usage) errors.usage = std::current_exception();
                } else {
                    errors.numerical.emplace_back(i, e.what());
                }
                rows[i] = Row(width, kNaN);
            }
        }
    };
    const unsigned threads = worker_count(n);
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (errors.usage) std::rethrow_exception(errors.usage);
    return rows;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items)
{
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) fail(ErrorCode::InvalidParam, "expected key=value, got '" + item + "'");
        const std::string value = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0') fail(ErrorCode::InvalidParam, "non-numeric value in '" + item + "'");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

KernelSpec kernel_of(const Settings& s)
{
    return make_builtin(s.kernel, parse_params(s.params));
}

std::vector<double> t_values(const Settings& s, const char* command)
{
    if (s.t.empty()) fail(ErrorCode::InvalidParam, std::string(command) + " needs --t");
    return parse_range(s.t);
}

std::vector<double> gamma_values(const Settings& s, bool allow_signed)
{
    std::vector<double> out = parse_range(s.gamma);
    for (double g : out) {
        const double lo = allow_signed ? -1.0 : 0.0;
        if (!(g >= lo && g <= 1.0))
            fail(ErrorCode::InvalidParam, "gamma " + number(g) + " outside [" + number(lo) + ", 1]");
    }
    return out;
}

std::vector<PerturbedKind> kinds_of(const std::string& text)
{
    std::vector<PerturbedKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "F11") out.push_back(PerturbedKind::F11);
        else if (item == "F12") out.push_back(PerturbedKind::F12);
        else if (item == "F4") out.push_back(PerturbedKind::F4);
        else fail(ErrorCode::InvalidParam, "unknown determinant kind '" + item + "'");
    }
    if (out.empty()) fail(ErrorCode::InvalidParam, "empty --kinds");
    return out;
}

struct Grid2 {
    double t;
    double gamma;
};

std::vector<Grid2> product(const std::vector<double>& ts, const std::vector<double>& gs)
{
    std::vector<Grid2> out;
    for (double t : ts)
        for (double g : gs) out.push_back({t, g});
    return out;
}

Table cmd_det(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const auto jobs = product(t_values(s, "det"), gamma_values(s, true));
    Table table{{"t", "gamma", "logF", "logG_plus", "logG_minus"}, {}, json::object()};
    table.rows = sweep(jobs.size(), 5, [&](std::size_t i) -> Row {
        const auto [t, g] = jobs[i];
        const DiscreteOperator op = discretize(spec, t, default_grid(spec, t, s.grid()));
        const double lf = log_det(op, g);
        if (g < 0) return {t, g, lf, kNaN, kNaN};
        return {t, g, lf, log_det_hankel(op, +1, std::sqrt(g)), log_det_hankel(op, -1, std::sqrt(g))};
    }, errors);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        table.rows[i][0] = jobs[i].t;
        table.rows[i][1] = jobs[i].gamma;
    }
    return table;
}

Table cmd_edge(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    if (s.N < 0 || s.N > 8) fail(ErrorCode::InvalidOrder, "--N must lie in [0, 8]");
    const auto jobs = product(t_values(s, "edge"), gamma_values(s, false));
    const std::size_t per = static_cast<std::size_t>(s.N) + 1;
    const auto blocks = sweep(jobs.size(), 1, [&](std::size_t i) -> Row {
        const auto [t, g] = jobs[i];
        const EdgeSample e = edge_sample(spec, t, g, s.N, default_grid(spec, t, s.grid()));
        Row flat;
        for (std::size_t n = 0; n < per; ++n) {
            flat.push_back(e.q[n]);
            flat.push_back(e.p[n]);
            flat.push_back(e.q_star[n]);
            flat.push_back(e.p_star[n]);
        }
        return flat;
    }, errors);
    Table table{{"t", "gamma", "n", "q", "p", "q_star", "p_star"}, {}, json::object()};
    for (std::size_t i = 0; i < jobs.size(); ++i)
        for (std::size_t n = 0; n < per; ++n) {
            Row r{jobs[i].t, jobs[i].gamma, static_cast<double>(n)};
            for (int k = 0; k < 4; ++k) {
                const std::size_t at = 4 * n + k;
                r.push_back(at < blocks[i].size() ? blocks[i][at] : Cell{kNaN});
            }
            table.rows.push_back(std::move(r));
        }
    return table;
}

Table cmd_tw(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const auto jobs = product(t_values(s, "tw"), gamma_values(s, false));
    Table table{{"t", "gamma", "tw_logF", "logF", "difference", "omega"}, {}, json::object()};
    table.rows = sweep(jobs.size(), 6, [&](std::size_t i) -> Row {
        const auto [t, g] = jobs[i];
        const TWResult r = tw_result(spec, t, g, s.grid());
        const double lf = log_fredholm(spec, t, g, s.grid());
        return {t, g, r.logF, lf, r.logF - lf, r.omega};
    }, errors);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        table.rows[i][0] = jobs[i].t;
        table.rows[i][1] = jobs[i].gamma;
    }
    return table;
}

Table cmd_perturbed(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const auto kinds = kinds_of(s.kinds);
    const auto base = product(t_values(s, "perturbed"), gamma_values(s, false));
    struct Job {
        Grid2 at;
        PerturbedKind kind;
    };
    std::vector<Job> jobs;
    for (const auto& b : base)
        for (auto k : kinds) jobs.push_back({b, k});
    Table table{{"t", "gamma", "kind", "direct", "closed", "from_G", "relative_difference"}, {}, json::object()};
    table.rows = sweep(jobs.size(), 7, [&](std::size_t i) -> Row {
        const auto& j = jobs[i];
        const double d = perturbed(spec, j.at.t, j.at.gamma, j.kind, PerturbedMethod::direct, s.grid());
        const double c = perturbed(spec, j.at.t, j.at.gamma, j.kind, PerturbedMethod::closed, s.grid());
        const double g = perturbed_from_G(spec, j.at.t, j.at.gamma, j.kind, s.grid());
        return {j.at.t, j.at.gamma, std::string(perturbed_name(j.kind)), d, c, g, (d - c) / c};
    }, errors);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        table.rows[i][0] = jobs[i].at.t;
        table.rows[i][1] = jobs[i].at.gamma;
        table.rows[i][2] = std::string(perturbed_name(jobs[i].kind));
    }
    return table;
}

Table cmd_zs(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const auto ts = t_values(s, "zs-check");
    if (ts.size() < 2) fail(ErrorCode::InvalidParam, "zs-check needs at least two t values");
    if (s.N < 0 || s.N > 8) fail(ErrorCode::InvalidOrder, "--N must lie in [0, 8]");
    const auto gs = gamma_values(s, false);
    Table table{{"gamma", "dq", "dp", "dq_star", "dp_star", "max_residual", "I0_drift"}, {}, json::object()};
    table.rows = sweep(gs.size(), 7, [&](std::size_t i) -> Row {
        const EdgeFunctions ef = edge_functions(spec, ts, gs[i], s.N, s.grid());
        const ZsResidual r = zs_residual(spec, ef, s.fd_step, s.grid());
        return {gs[i], r.dq, r.dp, r.dq_star, r.dp_star, r.max(), conserved_invariant(ef, 0).drift};
    }, errors);
    for (std::size_t i = 0; i < gs.size(); ++i) table.rows[i][0] = gs[i];
    return table;
}

Table cmd_rhp(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const std::vector<double> ts =
        s.t.empty() ? std::vector<double>{spec.flavor == Flavor::additive ? 0.0 : 1.0} : parse_range(s.t);
    const auto us = parse_range(s.u);
    const auto points = rhp_probe_points(spec.flavor);
    const auto deltas = rhp_deltas(spec.flavor);
    struct Job {
        double t;
        int kind;
        cplx z;
    };
    std::vector<Job> jobs;
    for (double t : ts) {
        for (cplx z : points) jobs.push_back({t, 0, z});
        for (double u : us) jobs.push_back({t, 1, contour_point(spec.flavor, u)});
        jobs.push_back({t, 2, {}});
    }
    std::vector<std::pair<Matrix2c, Matrix2c>> x1(jobs.size());
    const char* names[] = {"det", "jump", "x1"};
    Table table{{"t", "check", "re", "im", "defect"}, {}, json::object()};
    table.rows = sweep(jobs.size(), 5, [&](std::size_t i) -> Row {
        const Job& j = jobs[i];
        const Grid grid = rhp_grid(spec, j.t, s.grid());
        double defect = 0.0;
        if (j.kind == 0) {
            defect = std::abs(assemble_X(spec, j.t, j.z, grid).X.determinant() - 1.0);
        } else if (j.kind == 1) {
            const double u = spec.flavor == Flavor::additive ? j.z.real() : j.z.imag();
            defect = jump_defect(spec, j.t, u, deltas, grid);
        } else {
            x1[i] = {x1_coefficient(spec, j.t, {20.0, 40.0, 80.0}, grid), x1_prediction(spec, j.t, grid)};
            defect = (x1[i].first - x1[i].second).cwiseAbs().maxCoeff();
        }
        return {j.t, std::string(names[j.kind]), j.z.real(), j.z.imag(), defect};
    }, errors);
    json fits = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        table.rows[i][0] = jobs[i].t;
        table.rows[i][1] = std::string(names[jobs[i].kind]);
        if (jobs[i].kind == 2) {
            table.rows[i][2] = kNaN;
            table.rows[i][3] = kNaN;
            fits.push_back({{"t", jobs[i].t},
                            {"fit", complex_matrix(x1[i].first)},
                            {"prediction", complex_matrix(x1[i].second)}});
        }
    }
    table.diagnostics["x1"] = fits;
    return table;
}

Table cmd_ak(const Settings& s, RowErrors& errors, std::ostream& err)
{
    const KernelSpec spec = kernel_of(s);
    const AKExpansion e = ak_constants(spec, {s.contour_scale});
    std::vector<double> ts;
    if (!s.t.empty()) ts = parse_range(s.t);
    else if (spec.flavor == Flavor::additive) ts = {-4.0, -6.0, -8.0, -10.0};
    else ts = {1e2, 9e2, 4e3};
    const GridOptions fine = s.grid_overridden() ? s.grid() : GridOptions{32, 0.25, 0, 0.0, s.tol};
    Table table{{"t", "logF", "ak_logF", "residual", "outside_range"}, {}, json::object()};
    table.rows = sweep(ts.size(), 5, [&](std::size_t i) -> Row {
        const double lf = log_fredholm(spec, ts[i], 1.0, fine);
        const AKPrediction p = ak_logF(e, ts[i]);
        return {ts[i], lf, p.value, lf - p.value, p.outside_range ? 1.0 : 0.0};
    }, errors);
    for (std::size_t i = 0; i < ts.size(); ++i) table.rows[i][0] = ts[i];
    table.diagnostics = {{"flavor", flavor_name(e.flavor)},
                         {"linear_coefficient", e.linear_coefficient},
                         {"quadratic_term", e.quadratic_term},
                         {"winding_term", e.winding_term},
                         {"symmetric_shortcut", e.symmetric_shortcut},
                         {"epsilon", e.epsilon},
                         {"t0", e.t0},
                         {"contour_cutoff", e.contour_cutoff}};
    if (s.format == "csv")
        for (const auto& [k, v] : table.diagnostics.items()) err << "ak " << k << " = " << v.dump() << "\n";
    return table;
}

Table cmd_ode(const Settings& s, RowErrors& errors)
{
    const KernelSpec spec = kernel_of(s);
    const bool airy = spec.name == "airy";
    if (!airy && spec.name != "bessel")
        fail(ErrorCode::UnsupportedKernel, "ode-compare supports the airy and bessel kernels");
    const std::vector<double> ts = !s.t.empty() ? parse_range(s.t)
                                   : airy       ? parse_range("-1:3:17")
                                                : std::vector<double>{0.5, 1.0, 2.0};
    const OdeSamples o = airy ? pii_oracle(ts) : bessel_ode_oracle(spec.param("alpha", 0.0), ts);
    Table table{{"t", "q_det", "q_ode", "difference"}, {}, json::object()};
    table.rows = sweep(ts.size(), 4, [&](std::size_t i) -> Row {
        const double q = edge_sample(spec, ts[i], 1.0, 0, default_grid(spec, ts[i], s.grid())).q[0];
        return {ts[i], q, o.q[i], q - o.q[i]};
    }, errors);
    for (std::size_t i = 0; i < ts.size(); ++i) table.rows[i][0] = ts[i];
    return table;
}

json config_json(const Settings& s, const std::string& command)
{
    return {{"command", command},   {"kernel", s.kernel},   {"params", s.params}, {"t", s.t},
            {"gamma", s.gamma},     {"order", s.order},     {"panels", s.panels}, {"grading", s.grading},
            {"max_width", s.max_width}, {"tol", s.tol},     {"N", s.N},           {"fd_step", s.fd_step}};
}

void emit(const Table& table, const Settings& s, const std::string& command, std::ostream& out)
{
    if (s.format == "json") {
        json rows = json::array();
        for (const auto& r : table.rows) {
            json obj = json::object();
            for (std::size_t k = 0; k < table.columns.size(); ++k) obj[table.columns[k]] = json_cell(r[k]);
            rows.push_back(obj);
        }
        out << json{{"config", config_json(s, command)}, {"rows", rows}, {"diagnostics", table.diagnostics}}.dump(2)
            << "\n";
        return;
    }
    for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
    out << "\n";
    for (const auto& r : table.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << csv_field(r[k]);
        out << "\n";
    }
}

int cmd_selftest(const Settings& s, std::ostream& out)
{
    bool all = true;
    json rows = json::array();
    for (int id : parse_ids(s.only)) {
        if (id < 1 || id > acceptance::kCriteria) fail(ErrorCode::InvalidParam, "no criterion " + std::to_string(id));
        const acceptance::Outcome o = acceptance::run(id);
        all = all && o.pass;
        if (s.format == "json")
            rows.push_back({{"id", o.id},
                            {"name", o.name},
                            {"pass", o.pass},
                            {"measured", o.measured},
                            {"tolerance", o.tolerance},
                            {"seconds", o.seconds},
                            {"detail", o.detail}});
        else
            out << acceptance::summary_line(o) << std::endl;
    }
    if (s.format == "json")
        out << json{{"config", {{"command", "selftest"}, {"only", s.only}}}, {"rows", rows}, {"diagnostics", {{"pass", all}}}}
                   .dump(2)
            << "\n";
    return all ? 0 : 1;
}

} // namespace

std::vector<double> parse_range(const std::string& text)
{
    const auto to_double = [&](const std::string& item) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0' || !std::isfinite(v))
            fail(ErrorCode::InvalidParam, "bad number '" + item + "' in '" + text + "'");
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) fail(ErrorCode::InvalidParam, "range must be start:stop:count, got '" + text + "'");
        const double a = to_double(parts[0]), b = to_double(parts[1]);
        const double c = to_double(parts[2]);
        if (c < 1 || c != std::floor(c) || c > 1e6) fail(ErrorCode::InvalidParam, "bad count in '" + text + "'");
        const int n = static_cast<int>(c);
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    if (out.empty()) fail(ErrorCode::InvalidParam, "empty value list");
    return out;
}

std::vector<int> parse_ids(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    const auto to_int = [&](const std::string& v) {
        char* end = nullptr;
        const long x = std::strtol(v.c_str(), &end, 10);
        if (v.empty() || *end != '\0') fail(ErrorCode::InvalidParam, "bad criterion list '" + text + "'");
        return static_cast<int>(x);
    };
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(to_int(item));
            continue;
        }
        const int a = to_int(item.substr(0, dash)), b = to_int(item.substr(dash + 1));
        if (b < a) fail(ErrorCode::InvalidParam, "bad criterion range '" + item + "'");
        for (int i = a; i <= b; ++i) out.push_back(i);
    }
    if (out.empty()) fail(ErrorCode::InvalidParam, "empty criterion list");
    return out;
}

std::vector<cplx> rhp_probe_points(Flavor flavor)
{
    if (flavor == Flavor::additive)
        return {{0, 3}, {1, -2}, {0.8, 0.7}, {-2, 0.5}, {3, 2}, {-1, -1}, {0.5, -0.25}, {-4, 3}, {6, -1}, {0, -7}};
    return {{0.8, 0.7}, {0.2, 1.5}, {0.55, 3}, {0.3, -0.8}, {0.75, -2},
            {0.1, 0.5}, {0.9, 4},   {0.4, -5}, {0.65, 1.2}, {0.35, -0.3}};
}

std::vector<double> rhp_deltas(Flavor flavor)
{
    if (flavor == Flavor::additive) return {1e-2, 5e-3, 2.5e-3};
    return {4e-3, 2e-3, 1e-3};
}

Grid rhp_grid(const KernelSpec& spec, double t, const GridOptions& options)
{
    const bool overridden = options.order || options.panels || options.grading != 0.0 || options.max_width != 0.0;
    if (spec.flavor == Flavor::multiplicative && !overridden) return unit_power_grid(16, 16, 2.0, 8.0);
    return default_grid(spec, t, options);
}

unsigned worker_count(std::size_t jobs)
{
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(env_threads(), jobs)));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Settings s;
    CLI::App app{"hdet: Nystrom determinants, edge functions and asymptotic checks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file merged under the flags");
    app.add_option("--kernel", s.kernel, "gaussian, airy, laplace, bessel, mult-laplace");
    app.add_option("--param", s.params, "kernel parameter key=value")->allow_extra_args(false);
    app.add_option("--t", s.t, "start:stop:count or comma list");
    app.add_option("--gamma", s.gamma, "start:stop:count or comma list");
    app.add_option("--order", s.order, "Gauss-Legendre order per panel");
    app.add_option("--panels", s.panels, "panel count");
    app.add_option("--grading", s.grading, "panel grading");
    app.add_option("--max-width", s.max_width, "maximal panel width");
    app.add_option("--tol", s.tol, "truncation tolerance");
    app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", s.output, "output path (default stdout)");

    std::map<std::string, std::string> help = {
        {"det", "ln F and ln G over a (t, gamma) grid"},
        {"edge", "q_n, p_n, q*_n, p*_n tables"},
        {"tw", "Tracy-Widom representation against the determinant"},
        {"perturbed", "F11, F12, F4 direct against closed form"},
        {"zs-check", "Zakharov-Shabat residuals and I0 drift"},
        {"rhp-check", "det X, jump defects and X1"},
        {"ak", "Akhiezer-Kac constants and residual ladder"},
        {"ode-compare", "Painleve-II or Bessel ODE against q0"},
        {"selftest", "acceptance criteria"},
    };
    std::map<std::string, CLI::App*> sub;
    for (const auto& [name, text] : help) sub[name] = app.add_subcommand(name, text);
    for (const char* name : {"edge", "zs-check"}) sub[name]->add_option("--N", s.N, "highest edge-function index");
    sub["zs-check"]->add_option("--fd-step", s.fd_step, "finite-difference step");
    sub["perturbed"]->add_option("--kinds", s.kinds, "comma list of F11, F12, F4");
    sub["rhp-check"]->add_option("--u", s.u, "contour parameters for the jump check");
    sub["ak"]->add_option("--contour-scale", s.contour_scale, "scales the symbol contour cutoff");
    sub["selftest"]->add_option("--only", s.only, "criteria, e.g. 3 or 1-14 or 2,5");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string command;
    for (const auto& [name, app_ptr] : sub)
        if (app_ptr->parsed()) command = name;

    std::ofstream file;
    if (!s.output.empty()) {
        file.open(s.output);
        if (!file) {
            err << "error: cannot open " << s.output << "\n";
            return 2;
        }
    }
    std::ostream& sink = s.output.empty() ? out : file;

    RowErrors errors;
    try {
        if (command == "selftest") return cmd_selftest(s, sink);
        Table table;
        if (command == "det") table = cmd_det(s, errors);
        else if (command == "edge") table = cmd_edge(s, errors);
        else if (command == "tw") table = cmd_tw(s, errors);
        else if (command == "perturbed") table = cmd_perturbed(s, errors);
        else if (command == "zs-check") table = cmd_zs(s, errors);
        else if (command == "rhp-check") table = cmd_rhp(s, errors);
        else if (command == "ak") table = cmd_ak(s, errors, err);
        else table = cmd_ode(s, errors);
        if (!errors.numerical.empty()) {
            std::sort(errors.numerical.begin(), errors.numerical.end());
            for (const auto& [row, message] : errors.numerical) {
                err << "row " << row << ": " << message << "\n";
                table.diagnostics["errors"].push_back({{"row", row}, {"message", message}});
            }
        }
        emit(table, s, command, sink);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_usage() ? 2 : 1;
    }
    return errors.numerical.empty() ? 0 : 1;
}

} // namespace hdet::cli
