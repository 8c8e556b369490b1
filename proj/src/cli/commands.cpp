#include "stochmech/cli/commands.hpp"

#include "stochmech/control/scenarios.hpp"
#include "stochmech/core/errors.hpp"
#include "stochmech/core/hermite.hpp"
#include "stochmech/core/velocity.hpp"
#include "stochmech/fpsolver/fp.hpp"
#include "stochmech/oracles/kernels.hpp"
#include "stochmech/sde/ensemble.hpp"
#include "stochmech/spectral/ho_interval.hpp"
#include "stochmech/spectral/spectral.hpp"
#include "stochmech/spectral/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace stochmech::cli {

using nlohmann::json;
namespace fs = std::filesystem;

// Lengths in the config are in units of sigma0 and times in units of 1/omega;
// the engines run in those oscillator units and the tables are written in
// physical units.

namespace {

struct Common {
    PhysicalParams p;
    int n = 0;
    double x_max = 8.0;
    std::size_t points = 2000;
};

int quantum_number(const ScenarioConfig& c, int fallback)
{
    const long n = c.get_int("n", fallback);
    if (n < 0 || n > 60)
        throw ConfigError("n", "quantum number must lie in [0, 60]");
    return static_cast<int>(n);
}

std::size_t positive_count(const ScenarioConfig& c, const std::string& key, long fallback, long minimum)
{
    const long v = c.get_int(key, fallback);
    if (v < minimum)
        throw ConfigError(key, "must be at least " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
}

double positive(const ScenarioConfig& c, const std::string& key, double fallback)
{
    const double v = c.get_double(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(key, "must be positive");
    return v;
}

std::vector<double> times_list(const ScenarioConfig& c, const std::string& key, const std::vector<double>& fallback)
{
    auto t = c.get_list(key, fallback);
    for (double x : t) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw ConfigError(key, "times must be positive");
    }
    std::sort(t.begin(), t.end());
    return t;
}

Common common(const ScenarioConfig& c, int n_default, double x_max_default, long points_default)
{
    Common k;
    k.p = c.params();
    k.n = quantum_number(c, n_default);
    k.x_max = positive(c, "x_max", x_max_default);
    k.points = positive_count(c, "grid_points", points_default, 8);
    const auto nodes = ho::nodes(k.n);
    if (!nodes.empty() && nodes.back() >= 0.9 * k.x_max)
        throw ConfigError("x_max", "truncation radius must exceed the outermost node " +
                                       format_double(nodes.back()) + " with some margin");
    return k;
}

json params_json(const PhysicalParams& p)
{
    return {{"m", p.mass},          {"omega", p.omega},         {"action", p.action},
            {"mode", to_string(p.mode)}, {"D", p.diffusion}, {"sigma0", p.sigma0}};
}

GridFunction to_physical(const GridFunction& g, const PhysicalParams& p)
{
    GridFunction out = g;
    for (auto& s : out.segments()) {
        s.interval.lo *= p.sigma0;
        s.interval.hi *= p.sigma0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            s.x[i] *= p.sigma0;
            s.w[i] *= p.sigma0;
            s.values[i] /= p.sigma0;
        }
    }
    return out;
}

std::ofstream open_out(const ScenarioConfig& c, const std::string& name)
{
    std::ofstream out(fs::path(c.out_dir) / name);
    if (!out)
        throw NumericalError("cannot write " + (fs::path(c.out_dir) / name).string());
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

// Builds f0 on `grid` (oscillator units). `initial` picks the shape.
GridFunction initial_density(const ScenarioConfig& c, int n, const GridFunction& grid)
{
    const std::string kind = c.get("initial", "delta");
    const double x0 = c.get_double("x0", 1.0);
    GridFunction f;
    if (kind == "delta") {
        f = hat_delta(grid, x0);
    } else if (kind == "gaussian") {
        const double w = positive(c, "width", 1.0);
        f = grid.map([&](double x, double) { return std::exp(-0.5 * (x - x0) * (x - x0) / (w * w)); });
    } else if (kind == "stationary") {
        f = grid.map([&](double x, double) {
            const double phi = ho::eigenfunction(n, x);
            return phi * phi;
        });
    } else if (kind == "asymmetric") {
        const double q = c.get_double("q", 1.4);
        if (!(q > 0.0 && q < 2.0))
            throw ConfigError("q", "mass share must lie in (0, 2)");
        const double w = positive(c, "width", 0.5);
        const double centre = std::abs(x0);
        f = grid.map([&](double x, double) {
            const double d = std::abs(x) - centre;
            return std::exp(-0.5 * d * d / (w * w));
        });
        double plus = 0.0, minus = 0.0;
        for (const auto& s : f.segments())
            for (std::size_t i = 0; i < s.size(); ++i)
                (s.x[i] > 0.0 ? plus : minus) += s.w[i] * s.values[i];
        if (!(plus > 0.0) || !(minus > 0.0))
            throw ConfigError("x0", "asymmetric start needs mass on both sides of 0");
        return f.map([&](double x, double v) { return x > 0.0 ? 0.5 * q * v / plus : (1.0 - 0.5 * q) * v / minus; });
    } else {
        throw ConfigError("initial", "expected delta, gaussian, stationary or asymmetric, got '" + kind + "'");
    }
    const double mass = f.integral();
    if (!(mass > 0.0))
        throw ConfigError("initial", "initial density has no mass on the grid");
    return f.map([&](double, double v) { return v / mass; });
}

json frame_stats(const GridFunction& f)
{
    return {{"mass", f.integral()}, {"interval_masses", f.segment_masses()}, {"min", f.min_value()}};
}

double l1_resampled(const GridFunction& f, const GridFunction& g)
{
    if (f.same_grid(g))
        return l1_distance(f, g);
    return l1_distance(f, f.map([&](double x, double) { return g.interpolate(x); }));
}

Interval parse_interval(const std::string& text, const std::vector<double>& nodes)
{
    std::stringstream ss(text);
    std::string a, b, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || std::getline(ss, extra, ','))
        throw ConfigError("interval", "expected 'lo,hi'");
    Interval iv;
    try {
        iv.lo = std::stod(a);
        iv.hi = std::stod(b);
    } catch (const std::exception&) {
        throw ConfigError("interval", "expected two numbers, got '" + text + "'");
    }
    if (!(iv.hi > iv.lo))
        throw ConfigError("interval", "needs lo < hi");
    for (double node : nodes) {
        if (node > iv.lo + 1e-9 && node < iv.hi - 1e-9)
            throw ConfigError("interval", "contains the node " + format_double(node));
    }
    auto kind_of = [&](double x) {
        for (double node : nodes) {
            if (std::abs(node - x) < 1e-9)
                return EndKind::node;
        }
        return EndKind::regular;
    };
    iv.lo_kind = kind_of(iv.lo);
    iv.hi_kind = kind_of(iv.hi);
    if (iv.lo_kind == EndKind::node)
        iv.lo = *std::min_element(nodes.begin(), nodes.end(), [&](double u, double v) {
            return std::abs(u - iv.lo) < std::abs(v - iv.lo);
        });
    if (iv.hi_kind == EndKind::node)
        iv.hi = *std::min_element(nodes.begin(), nodes.end(), [&](double u, double v) {
            return std::abs(u - iv.hi) < std::abs(v - iv.hi);
        });
    return iv;
}

Parity parse_parity(const std::string& s)
{
    if (s == "any")
        return Parity::any;
    if (s == "even")
        return Parity::even;
    if (s == "odd")
        return Parity::odd;
    throw ConfigError("parity", "expected any, even or odd, got '" + s + "'");
}

// +1 even, -1 odd, 0 when the grid is not symmetric or the function is neither.
int parity_of(const GridFunction& g)
{
    const auto& s = g.segment(0);
    const std::size_t n = s.size();
    if (std::abs(s.interval.lo + s.interval.hi) > 1e-9 * (1.0 + s.interval.length()))
        return 0;
    double even = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        even += std::abs(s.values[i] - s.values[n - 1 - i]);
        odd += std::abs(s.values[i] + s.values[n - 1 - i]);
    }
    if (odd < 1e-6 * even)
        return -1;
    if (even < 1e-6 * odd)
        return 1;
    return 0;
}

std::string parity_name(int p)
{
    return p > 0 ? "even" : (p < 0 ? "odd" : "none");
}

double tolerance(const ScenarioConfig& c, double fallback)
{
    return positive(c, "tolerance", fallback);
}

}  // namespace

json cmd_spectrum(const ScenarioConfig& c)
{
    const Common k = common(c, 0, 8.0, 2000);
    const auto v = ho_velocity_field(k.n);
    const std::size_t n_eigs = positive_count(c, "n_eigs", 5, 1);
    const Parity parity = parse_parity(c.get("parity", "any"));

    SLOptions opts;
    opts.cells = k.points;
    opts.richardson = c.get_bool("richardson", true);
    const std::string scheme = c.get("scheme", "fitted_flux");
    if (scheme == "fitted_flux")
        opts.scheme = SLScheme::fitted_flux;
    else if (scheme == "potential_form")
        opts.scheme = SLScheme::potential_form;
    else
        throw ConfigError("scheme", "expected fitted_flux or potential_form, got '" + scheme + "'");

    std::vector<Interval> parts;
    if (c.has("interval"))
        parts.push_back(parse_interval(c.get("interval", ""), v.nodes));
    else
        parts = v.partition(k.x_max);
    if (parity != Parity::any &&
        (parts.size() != 1 || std::abs(parts[0].lo + parts[0].hi) > 1e-9 * (1.0 + parts[0].length())))
        throw ConfigError("parity", "parity sectors need a single interval symmetric about 0");

    auto csv = open_out(c, "eigenvalues.csv");
    csv << "interval,lo,hi,index,mu,lambda,parity,mu_confluent\n";
    json tables = json::array();
    json intervals = json::array();
    for (std::size_t ii = 0; ii < parts.size(); ++ii) {
        const Interval& iv = parts[ii];
        const std::size_t want = parity == Parity::any ? n_eigs : 2 * n_eigs + 1;
        const auto dec = solve_sturm_liouville(self_adjoint_coeffs(v, 1.0, iv), want, opts);

        std::vector<double> mu;
        std::vector<int> par;
        for (std::size_t j = 0; j < dec.count(); ++j) {
            const int pj = parity_of(dec.eigenfunctions[j]);
            if (parity == Parity::even && pj != 1)
                continue;
            if (parity == Parity::odd && pj != -1)
                continue;
            mu.push_back(dec.eigenvalues[j]);
            par.push_back(pj);
            if (mu.size() == n_eigs)
                break;
        }
        if (mu.size() < n_eigs)
            throw NumericalError("interval " + std::to_string(ii) + ": only " + std::to_string(mu.size()) +
                                 " eigenfunctions of the requested parity were resolved");

        json confluent = nullptr;
        std::string confluent_note;
        if (iv.lo_kind != EndKind::regular && iv.hi_kind != EndKind::regular) {
            try {
                confluent = ho_interval_eigenvalues(k.n, iv, n_eigs, parity);
            } catch (const NumericalError& e) {
                confluent_note = e.what();
            }
        }

        for (std::size_t j = 0; j < mu.size(); ++j) {
            csv << ii << ',' << k.p.from_adim_x(iv.lo) << ',' << k.p.from_adim_x(iv.hi) << ',' << j << ',' << mu[j]
                << ',' << mu[j] * k.p.omega << ',' << parity_name(par[j]) << ',';
            if (confluent.is_array())
                csv << confluent[j].get<double>();
            csv << '\n';
        }

        json entry = to_json(dec);
        entry["selected_eigenvalues"] = mu;
        entry["confluent_eigenvalues"] = confluent;
        tables.push_back(std::move(entry));

        json row{{"lo", iv.lo}, {"hi", iv.hi}, {"eigenvalues", mu}, {"confluent", confluent}};
        if (confluent.is_array()) {
            double diff = 0.0;
            for (std::size_t j = 0; j < mu.size(); ++j)
                diff = std::max(diff, std::abs(mu[j] - confluent[j].get<double>()));
            row["max_confluent_difference"] = diff;
        }
        if (!confluent_note.empty())
            row["confluent_error"] = confluent_note;
        intervals.push_back(std::move(row));
    }
    auto js = open_out(c, "spectrum.json");
    js << tables.dump(1) << '\n';
    return {{"pass", true},
            {"n", k.n},
            {"scheme", scheme},
            {"richardson", opts.richardson},
            {"units", "mu in units of omega; interval ends in units of sigma0"},
            {"intervals", intervals},
            {"files", {"eigenvalues.csv", "spectrum.json"}}};
}

json cmd_evolve(const ScenarioConfig& c)
{
    const Common k = common(c, 0, 8.0, 2000);
    FPProblem prob;
    prob.v = ho_velocity_field(k.n);
    const GridFunction grid = fp_grid(prob.v, k.x_max, k.points);
    prob.f0 = initial_density(c, k.n, grid);
    prob.output_times = times_list(c, "output_times", {0.1, 1.0, 10.0});
    prob.dt = positive(c, "dt", 1e-2);
    const auto traj = evolve_fp(prob);

    FPTrajectory phys = traj;
    for (auto& t : phys.times)
        t = k.p.from_adim_t(t);
    for (auto& f : phys.frames)
        f = to_physical(f, k.p);
    auto csv = open_out(c, "trajectory.csv");
    write_trajectory_csv(csv, phys);

    json frames = json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        json fr = frame_stats(traj.frames[i]);
        fr["t"] = phys.times[i];
        frames.push_back(std::move(fr));
    }
    return {{"pass", true},
            {"n", k.n},
            {"initial", c.get("initial", "delta")},
            {"initial_masses", traj.initial_masses},
            {"max_mass_drift", traj.max_mass_drift},
            {"steps", traj.steps},
            {"frames", frames},
            {"files", {"trajectory.csv"}}};
}

json cmd_kernel(const ScenarioConfig& c)
{
    const Common k = common(c, 0, 12.0, 2000);
    if (k.n > 1)
        throw ConfigError("n", "closed-form kernels exist for n = 0 and n = 1 only");
    const auto v = ho_velocity_field(k.n);
    const GridFunction grid = fp_grid(v, k.x_max, k.points);
    const auto sources = c.get_list("sources", {1.0});
    const double t = positive(c, "t", 1.0);
    const double tol = tolerance(c, k.n == 0 ? 1e-3 : 3e-3);
    for (double x0 : sources) {
        if (!(std::abs(x0) < k.x_max) || (k.n == 1 && x0 == 0.0))
            throw ConfigError("sources", "source " + format_double(x0) + " is outside the domain or on a node");
    }
    const auto table = tabulate_kernel(v, 1.0, grid, sources, t, positive(c, "dt", 1e-2));

    std::vector<KernelSample> rows;
    json per_source = json::array();
    bool pass = true;
    for (std::size_t j = 0; j < sources.size(); ++j) {
        const double x0 = sources[j];
        const auto oracle = grid.map([&](double x, double) {
            return k.n == 0 ? ho::ou_kernel(x, t, x0) : ho::n1_kernel(x, t, x0);
        });
        const double l1 = l1_distance(table.slices[j], oracle);
        pass = pass && l1 <= tol;
        per_source.push_back({{"x0", k.p.from_adim_x(x0)}, {"l1", l1}, {"pass", l1 <= tol}});
        for (const auto& s : table.slices[j].segments())
            for (std::size_t i = 0; i < s.size(); ++i)
                rows.push_back({k.p.from_adim_x(x0), k.p.from_adim_x(s.x[i]), k.p.from_adim_t(t),
                                s.values[i] / k.p.sigma0});
    }
    auto csv = open_out(c, "kernel.csv");
    write_kernel_csv(csv, rows);
    return {{"pass", pass},
            {"n", k.n},
            {"t", k.p.from_adim_t(t)},
            {"tolerance", tol},
            {"oracle", k.n == 0 ? "ou_oracle" : "n1_oracle"},
            {"sources", per_source},
            {"files", {"kernel.csv"}}};
}

json cmd_control(const ScenarioConfig& c)
{
    const PhysicalParams p = c.params();
    ScenarioKind kind;
    try {
        kind = parse_scenario_kind(c.get("kind", "ou"));
    } catch (const DomainError& e) {
        throw ConfigError("kind", e.what());
    }
    // Config lengths are in sigma0 and times in 1/omega; the scenario takes physical units.
    const double t_end = positive(c, "t_end", 10.0);
    ScenarioOptions so;
    so.x0 = p.from_adim_x(c.get_double("x0", 1.0));
    so.a = p.from_adim_x(c.get_double("a", 1.0));
    so.tau = p.from_adim_t(positive(c, "tau", 1.0));
    so.N = static_cast<int>(c.get_int("N", so.N));
    so.t_end = p.from_adim_t(t_end);
    ControlledEvolution ev;
    try {
        ev = make_scenario(kind, so, p);
    } catch (const DomainError& e) {
        throw ConfigError(e.field(), e.what());
    }

    CertifyOptions co;
    co.x_max = positive(c, "x_max", 5.0);
    co.exclusion = positive(c, "exclusion", 0.25);
    co.points = positive_count(c, "grid_points", 8000, 16);
    co.dt = positive(c, "frame_dt", 1e-3);
    const double certify_from = c.get_double("certify_from", 1.0);
    const double tol = tolerance(c, 1e-3);

    std::vector<double> times =
        c.has("frames") ? times_list(c, "frames", {}) : control_times(t_end, 2.0 * co.dt);
    if (times.back() < t_end && !c.has("frames"))
        times.push_back(t_end);

    std::vector<FrameCheck> frames;
    json per_frame = json::array();
    double worst = 0.0, worst_rel = 0.0;
    std::vector<double> excluded;
    const double e = p.energy_unit();
    for (double s : times) {
        if (!(s > co.dt))
            throw ConfigError("frames", "frame times must exceed frame_dt");
        auto fc = certify_frame(ev, p.from_adim_t(s), co);
        const double rmax = fc.residual.max_abs() / e;
        const double rl2 = fc.residual.rms() / e;
        if (s >= certify_from) {
            worst = std::max(worst, rmax);
            worst_rel = std::max(worst_rel, fc.relative_error);
        }
        for (double x : fc.excluded)
            if (std::find(excluded.begin(), excluded.end(), x) == excluded.end())
                excluded.push_back(x);
        per_frame.push_back({{"t", fc.t}, {"residual_max", rmax}, {"residual_l2", rl2},
                             {"relative_error", fc.relative_error}, {"excluded_points", fc.excluded.size()}});
        frames.push_back(std::move(fc));
    }

    // Distance of the last frame's potential from the oscillator on |x| <= 3 sigma0.
    const FrameCheck& last = frames.back();
    double dev = 0.0, ho_scale = 0.0;
    for (const auto& seg : last.V_closed.segments()) {
        for (std::size_t i = 0; i < seg.size(); ++i) {
            if (std::abs(seg.x[i]) > 3.0 * p.sigma0)
                continue;
            const double vho = ho_potential(seg.x[i], p);
            dev = std::max(dev, std::abs(seg.values[i] - vho));
            ho_scale = std::max(ho_scale, std::abs(vho));
        }
    }

    auto csv = open_out(c, "control.csv");
    write_control_csv(csv, frames);
    std::sort(excluded.begin(), excluded.end());
    json singular = json::array();
    for (double x : ev.singular)
        singular.push_back(p.from_adim_x(x));
    return {{"pass", worst <= tol},
            {"kind", to_string(kind)},
            {"tolerance", tol},
            {"certify_from", p.from_adim_t(certify_from)},
            {"residual_max", worst},
            {"relative_error_max", worst_rel},
            {"units", "residuals in units of hbar*omega"},
            {"singular_points", singular},
            {"exclusion_radius", p.from_adim_x(co.exclusion)},
            {"excluded_points", excluded},
            {"final_time", last.t},
            {"final_ho_deviation", dev / e},
            {"final_ho_relative_deviation", ho_scale > 0.0 ? dev / ho_scale : dev},
            {"frames", per_frame},
            {"files", {"control.csv"}}};
}

json cmd_simulate(const ScenarioConfig& c)
{
    const Common k = common(c, 0, 8.0, 2000);
    const auto v = ho_velocity_field(k.n);
    SDEOptions o;
    o.dt = positive(c, "dt", 1e-3);
    o.n_particles = positive_count(c, "n_particles", 10000, 1);
    o.t_end = positive(c, "t_end", 1.0);
    o.seed = c.seed;
    o.snapshot_times = times_list(c, "snapshot_times", {o.t_end});

    const std::string initial = c.get("initial", "delta");
    Sampler sampler;
    if (initial == "delta") {
        sampler = point_sampler(c.get_double("x0", 1.0));
    } else if (initial == "gaussian") {
        sampler = gaussian_sampler(c.get_double("x0", 1.0), positive(c, "width", 1.0));
    } else {
        sampler = grid_sampler(initial_density(c, k.n, fp_grid(v, k.x_max, k.points)));
    }
    SDEResult r = simulate(v, sampler, o);

    json snaps = json::array();
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        double mean = 0.0, m2 = 0.0;
        for (double x : r.snapshots[i])
            mean += x;
        mean /= static_cast<double>(r.snapshots[i].size());
        for (double x : r.snapshots[i])
            m2 += (x - mean) * (x - mean);
        const double var = r.snapshots[i].size() > 1 ? m2 / static_cast<double>(r.snapshots[i].size() - 1) : 0.0;
        snaps.push_back({{"t", k.p.from_adim_t(r.times[i])},
                         {"mean", k.p.from_adim_x(mean)},
                         {"variance", var * k.p.sigma0 * k.p.sigma0}});
    }

    SDEResult phys = r;
    for (auto& t : phys.times)
        t = k.p.from_adim_t(t);
    for (auto& s : phys.snapshots)
        for (auto& x : s)
            x = k.p.from_adim_x(x);
    auto csv = open_out(c, "snapshots.csv");
    write_snapshot_csv(csv, phys);
    return {{"pass", r.label_violations == 0},
            {"n", k.n},
            {"particles", o.n_particles},
            {"steps", r.steps},
            {"substeps", r.substeps},
            {"rejected_crossings", r.rejected_crossings},
            {"label_violations", r.label_violations},
            {"snapshots", snaps},
            {"files", {"snapshots.csv"}}};
}

json cmd_compare(const ScenarioConfig& c)
{
    std::vector<std::string> engines;
    {
        std::stringstream ss(c.get("engines", "fpsolver,ou_oracle"));
        std::string e;
        while (std::getline(ss, e, ','))
            engines.push_back(e);
    }
    if (engines.size() != 2)
        throw ConfigError("engines", "name exactly two engines, e.g. 'fpsolver,ou_oracle'");
    auto has = [&](const std::string& e) { return engines[0] == e || engines[1] == e; };
    for (const auto& e : engines) {
        if (e != "fpsolver" && e != "spectral" && e != "sde" && e != "ou_oracle" && e != "n1_oracle")
            throw ConfigError("engines", "unknown engine '" + e + "'");
    }
    if (engines[0] == engines[1])
        throw ConfigError("engines", "name two different engines");
    if (has("ou_oracle") && has("n1_oracle"))
        throw ConfigError("engines", "the two oracles describe different drifts");

    const bool oracle = has("ou_oracle") || has("n1_oracle");
    const int oracle_n = has("n1_oracle") ? 1 : 0;
    if (oracle && c.has("n") && c.get_int("n", 0) != oracle_n)
        throw ConfigError("n", "the " + std::string(oracle_n ? "n1" : "ou") + " oracle needs n = " +
                                   std::to_string(oracle_n));
    if (has("spectral") && oracle)
        throw ConfigError("engines", "spectral-vs-oracle needs a delta start the truncated expansion cannot resolve; "
                                     "compare spectral with fpsolver instead");

    const Common k = common(c, oracle ? oracle_n : 1, 12.0, 2000);
    const auto v = ho_velocity_field(k.n);
    const double x0 = c.get_double("x0", 1.0);
    if (oracle && !(std::abs(x0) < k.x_max && (k.n == 0 || x0 != 0.0)))
        throw ConfigError("x0", "source must lie inside the domain and off the nodes");

    json table = json::array();
    auto csv = open_out(c, "compare.csv");
    csv << "t,l1\n";
    double tol = 0.0;
    double worst = 0.0;
    auto record = [&](double s, double l1) {
        worst = std::max(worst, l1);
        table.push_back({{"t", k.p.from_adim_t(s)}, {"l1", l1}, {"pass", l1 <= tol}});
        csv << k.p.from_adim_t(s) << ',' << l1 << '\n';
    };
    auto oracle_density = [&](double s) {
        return [&, s](double x) { return k.n == 0 ? ho::ou_kernel(x, s, x0) : ho::n1_kernel(x, s, x0); };
    };

    if (has("sde")) {
        if (!oracle)
            throw ConfigError("engines", "the sde engine is compared against an oracle");
        tol = tolerance(c, 0.05);
        const auto times = times_list(c, "times", {1.0});
        SDEOptions o;
        o.dt = positive(c, "sde_dt", 1e-3);
        o.n_particles = positive_count(c, "n_particles", 100000, 100);
        o.t_end = times.back();
        o.seed = c.seed;
        o.snapshot_times = times;
        const auto r = simulate(v, point_sampler(x0), o);
        HistogramOptions h;
        h.bins = positive_count(c, "bins", 200, 2);
        h.lo = -k.x_max;
        h.hi = k.x_max;
        for (std::size_t i = 0; i < r.times.size(); ++i)
            record(r.times[i], histogram_l1(r.snapshots[i], oracle_density(r.times[i]), h));
    } else {
        tol = tolerance(c, 1e-3);
        FPProblem prob;
        prob.v = v;
        const GridFunction grid = fp_grid(v, k.x_max, k.points);
        prob.f0 = oracle ? hat_delta(grid, x0) : initial_density(c, k.n, grid);
        prob.output_times = times_list(c, "times", oracle ? std::vector<double>{0.1, 0.5, 1.0, 5.0}
                                                          : std::vector<double>{0.1, 1.0, 10.0});
        prob.dt = positive(c, "dt", 1e-2);
        const auto traj = evolve_fp(prob);
        if (oracle) {
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const auto f = oracle_density(traj.times[i]);
                record(traj.times[i], l1_distance(traj.frames[i], grid.map([&](double x, double) { return f(x); })));
            }
        } else {
            const std::size_t n_eigs = positive_count(c, "n_eigs", 80, 1);
            std::vector<SpectralDecomposition> decs;
            for (const auto& seg : grid.segments()) {
                SLOptions opts;
                opts.cells = seg.size();
                decs.push_back(solve_sturm_liouville(self_adjoint_coeffs(v, 1.0, seg.interval),
                                                     std::min(n_eigs, seg.size()), opts));
            }
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const auto spec = evolve_spectral(decs, prob.f0, traj.times[i]);
                record(traj.times[i], l1_resampled(traj.frames[i], spec.density));
            }
        }
    }
    return {{"pass", worst <= tol},
            {"engines", engines},
            {"n", k.n},
            {"tolerance", tol},
            {"max_l1", worst},
            {"table", table},
            {"files", {"compare.csv"}}};
}

RunResult run(const ScenarioConfig& c, std::ostream& err)
{
    RunResult r;
    r.report = {{"command", c.command}, {"seed", c.seed}};
    auto finish = [&](int code, const std::string& message) {
        r.exit_code = code;
        if (!message.empty()) {
            err << "error: " << message << '\n';
            r.report["error"] = message;
        }
        r.report["exit_code"] = code;
        std::error_code ec;
        if (fs::is_directory(c.out_dir, ec)) {
            std::ofstream out(fs::path(c.out_dir) / "report.json");
            out << r.report.dump(2) << '\n';
        }
        return r;
    };

    try {
        validate(c);
        r.report["config_hash"] = config_hash(c);
        r.report["params"] = params_json(c.params());
        std::error_code ec;
        fs::create_directories(c.out_dir, ec);
        if (ec || !fs::is_directory(c.out_dir))
            throw ConfigError("out", "cannot create output directory '" + c.out_dir + "'");
        {
            std::ofstream snap(fs::path(c.out_dir) / "config.snapshot");
            snap << to_text(c);
        }
        json body;
        if (c.command == "spectrum")
            body = cmd_spectrum(c);
        else if (c.command == "evolve")
            body = cmd_evolve(c);
        else if (c.command == "kernel")
            body = cmd_kernel(c);
        else if (c.command == "control")
            body = cmd_control(c);
        else if (c.command == "simulate")
            body = cmd_simulate(c);
        else
            body = cmd_compare(c);
        for (auto& [key, value] : body.items())
            r.report[key] = value;
        if (!r.report.value("pass", true))
            return finish(exit_tolerance, "tolerance check failed; see report.json");
        return finish(exit_ok, "");
    } catch (const ConfigError& e) {
        r.report["bad_key"] = e.key();
        return finish(exit_config, e.what());
    } catch (const DomainError& e) {
        r.report["bad_key"] = e.field();
        return finish(exit_config, e.what());
    } catch (const NumericalError& e) {
        return finish(exit_numerical, e.what());
    } catch (const std::exception& e) {
        return finish(exit_numerical, e.what());
    }
}

}  // namespace stochmech::cli
