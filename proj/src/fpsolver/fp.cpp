#include "stochmech/fpsolver/fp.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace stochmech {

namespace {

double bernoulli(double z)
{
    if (std::abs(z) < 1e-8)
        return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

// Transition rates between neighbouring cells of one interval:
// up[i] from i to i+1, down[i] from i+1 to i.
struct Rates {
    std::vector<double> up, down;

    double max_outflow() const
    {
        double m = 0.0;
        const std::size_t n = up.size() + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double out = (i < up.size() ? up[i] : 0.0) + (i > 0 ? down[i - 1] : 0.0);
            m = std::max(m, out);
        }
        return m;
    }

    std::size_t argmax_outflow() const
    {
        std::size_t arg = 0;
        double m = -1.0;
        const std::size_t n = up.size() + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double out = (i < up.size() ? up[i] : 0.0) + (i > 0 ? down[i - 1] : 0.0);
            if (out > m) {
                m = out;
                arg = i;
            }
        }
        return arg;
    }
};

Rates rates(const VelocityField& v, double D, const Segment& s, double t)
{
    const std::size_t n = s.size();
    Rates r;
    r.up.resize(n - 1);
    r.down.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = s.x[i + 1] - s.x[i];
        const double k = D / (h * h);
        const double w = drift_integral(v, s.x[i], s.x[i + 1], t) / D;
        r.up[i] = k * bernoulli(-w);
        r.down[i] = k * bernoulli(w);
    }
    return r;
}

// (M f)_i for the generator of one interval.
std::vector<double> generator_apply(const Rates& r, const std::vector<double>& f)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double flow = r.up[i] * f[i] - r.down[i] * f[i + 1];
        out[i] -= flow;
        out[i + 1] += flow;
    }
    return out;
}

void crank_nicolson(const Rates& r, std::vector<double>& f, double dt)
{
    const std::size_t n = f.size();
    const auto mf = generator_apply(r, f);
    std::vector<double> rhs(n), diag(n), sub(n - 1), sup(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = f[i] + 0.5 * dt * mf[i];
        diag[i] = 1.0 + 0.5 * dt * ((i < n - 1 ? r.up[i] : 0.0) + (i > 0 ? r.down[i - 1] : 0.0));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        sub[i] = -0.5 * dt * r.up[i];
        sup[i] = -0.5 * dt * r.down[i];
    }
    f = linalg::solve_tridiagonal(sub, diag, sup, rhs);
}

double nearest_node(const VelocityField& v, double x)
{
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double xk : v.nodes) {
        if (std::isnan(best) || std::abs(xk - x) < std::abs(best - x))
            best = xk;
    }
    return best;
}

}  // namespace

GridFunction fp_grid(const VelocityField& v, double x_max, std::size_t grid_points)
{
    return GridFunction::cells(v.partition(x_max), grid_points);
}

FPTrajectory evolve_fp(const FPProblem& problem)
{
    const auto& v = problem.v;
    if (!(problem.D > 0.0))
        throw DomainError("D", "diffusion coefficient must be positive");
    if (!(problem.dt > 0.0))
        throw DomainError("dt", "time step must be positive");
    if (problem.f0.min_value() < 0.0)
        throw DomainError("f0", "initial density must be non-negative");
    for (const auto& s : problem.f0.segments()) {
        if (s.size() < 3)
            throw DomainError("f0", "every interval needs at least three cells");
        for (double xk : v.nodes) {
            if (xk > s.interval.lo && xk < s.interval.hi)
                throw DomainError("f0", "grid interval contains the node " + std::to_string(xk));
        }
    }

    FPTrajectory traj;
    std::vector<std::vector<double>> f;
    for (const auto& s : problem.f0.segments()) {
        f.push_back(s.values);
        traj.initial_masses.push_back(s.integral());
    }
    const auto& segs = problem.f0.segments();

    std::vector<Rates> frozen;
    if (v.stationary) {
        for (const auto& s : segs)
            frozen.push_back(rates(v, problem.D, s, problem.t0));
    }

    auto snapshot = [&](double t) {
        GridFunction g = problem.f0;
        for (std::size_t k = 0; k < segs.size(); ++k)
            g.segments()[k].values = f[k];
        traj.times.push_back(t);
        traj.frames.push_back(std::move(g));
    };

    std::vector<double> outputs = problem.output_times;
    std::sort(outputs.begin(), outputs.end());
    double t = problem.t0;
    for (double t_out : outputs) {
        if (t_out < problem.t0)
            throw DomainError("output_times", "output time precedes t0");
        while (t < t_out) {
            double dt = std::min(problem.dt, t_out - t);
            std::vector<Rates> current;
            for (int attempt = 0;; ++attempt) {
                current.clear();
                double limit = std::numeric_limits<double>::infinity();
                std::size_t worst_seg = 0;
                for (std::size_t k = 0; k < segs.size(); ++k) {
                    current.push_back(v.stationary ? frozen[k] : rates(v, problem.D, segs[k], t + 0.5 * dt));
                    const double out = current.back().max_outflow();
                    if (2.0 / out < limit) {
                        limit = 2.0 / out;
                        worst_seg = k;
                    }
                }
                if (limit < 1e-10) {
                    const auto& s = segs[worst_seg];
                    const double x = s.x[current[worst_seg].argmax_outflow()];
                    std::ostringstream msg;
                    msg << "time step underflow at t = " << t << " near x = " << x;
                    if (!v.nodes.empty())
                        msg << " (node " << nearest_node(v, x) << ")";
                    throw NumericalError(msg.str());
                }
                if (dt <= limit)
                    break;
                // Land exactly on the output time with equal positive steps.
                const double n_steps = std::ceil((t_out - t) / limit);
                dt = (t_out - t) / n_steps;
                if (v.stationary || attempt > 3)
                    break;
            }
            for (std::size_t k = 0; k < segs.size(); ++k)
                crank_nicolson(current[k], f[k], dt);
            t = (t_out - t - dt) <= 1e-14 * std::max(1.0, std::abs(t_out)) ? t_out : t + dt;
            ++traj.steps;
            for (std::size_t k = 0; k < segs.size(); ++k) {
                double m = 0.0;
                for (std::size_t i = 0; i < f[k].size(); ++i)
                    m += segs[k].w[i] * f[k][i];
                traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(m - traj.initial_masses[k]));
            }
        }
        snapshot(t_out);
    }
    return traj;
}

GridFunction hat_delta(const GridFunction& grid, double x0)
{
    GridFunction g = grid.map([](double, double) { return 0.0; });
    auto& segs = g.segments();
    const int k = g.locate(x0);
    if (k < 0) {
        // On a node (or outside the grid): split between the adjacent end cells.
        for (std::size_t j = 0; j + 1 < segs.size(); ++j) {
            if (std::abs(segs[j].interval.hi - x0) < 1e-12 && std::abs(segs[j + 1].interval.lo - x0) < 1e-12) {
                segs[j].values.back() = 0.5 / segs[j].w.back();
                segs[j + 1].values.front() = 0.5 / segs[j + 1].w.front();
                return g;
            }
        }
        throw DomainError("x0", "impulse location " + std::to_string(x0) + " lies outside the grid");
    }
    auto& s = segs[static_cast<std::size_t>(k)];
    if (x0 <= s.x.front()) {
        s.values.front() = 1.0 / s.w.front();
        return g;
    }
    if (x0 >= s.x.back()) {
        s.values.back() = 1.0 / s.w.back();
        return g;
    }
    const auto j = static_cast<std::size_t>(std::upper_bound(s.x.begin(), s.x.end(), x0) - s.x.begin()) - 1;
    const double theta = (x0 - s.x[j]) / (s.x[j + 1] - s.x[j]);
    s.values[j] = (1.0 - theta) / s.w[j];
    s.values[j + 1] = theta / s.w[j + 1];
    return g;
}

double l1_distance(const GridFunction& f, const GridFunction& g)
{
    if (!f.same_grid(g))
        throw DomainError("grid", "L1 distance needs both functions on the same grid");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.segment_count(); ++k) {
        const auto& a = f.segment(k);
        const auto& b = g.segment(k);
        for (std::size_t i = 0; i < a.size(); ++i)
            sum += a.w[i] * std::abs(a.values[i] - b.values[i]);
    }
    return sum;
}

std::vector<double> boundary_fluxes(const VelocityField& v, double D, const GridFunction& f, double t)
{
    std::vector<double> out;
    for (const auto& s : f.segments()) {
        const auto mf = generator_apply(rates(v, D, s, t), s.values);
        // The generator only moves mass between cells of the interval, so the
        // flux through each end is what the interior balance leaves over.
        double through_lo = 0.0;
        double through_hi = 0.0;
        double partial = 0.0;
        for (std::size_t i = 0; i < mf.size(); ++i)
            partial += s.w[i] * mf[i];
        through_hi = -partial;
        out.push_back(through_lo);
        out.push_back(through_hi);
    }
    return out;
}

GridFunction chapman_kolmogorov(const TransitionKernel& p, const GridFunction& f0, double mass_tol)
{
    const auto xs = f0.all_x();
    std::vector<double> ws;
    for (const auto& s : f0.segments())
        ws.insert(ws.end(), s.w.begin(), s.w.end());
    const auto f = f0.all_values();

    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (f[j] == 0.0)
            continue;
        double mass = 0.0;
        std::vector<double> column(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            column[i] = p(xs[i], xs[j]);
            mass += ws[i] * column[i];
        }
        if (std::abs(mass - 1.0) > mass_tol) {
            throw NumericalError("kernel column at y = " + std::to_string(xs[j]) + " has mass " +
                                 std::to_string(mass));
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            out[i] += column[i] * f[j] * ws[j];
    }
    GridFunction g = f0;
    std::size_t idx = 0;
    for (auto& s : g.segments())
        for (double& v : s.values)
            v = out[idx++];
    return g;
}

double KernelTable::operator()(double x, double y) const
{
    if (slices.empty())
        return 0.0;
    const int k = slices.front().locate(y);
    if (k < 0)
        return 0.0;
    std::size_t lo = sources.size(), hi = sources.size();
    for (std::size_t j = 0; j < sources.size(); ++j) {
        if (slices.front().locate(sources[j]) != k)
            continue;
        if (sources[j] <= y && (lo == sources.size() || sources[j] > sources[lo]))
            lo = j;
        if (sources[j] >= y && (hi == sources.size() || sources[j] < sources[hi]))
            hi = j;
    }
    if (lo == sources.size() && hi == sources.size())
        return 0.0;
    if (lo == sources.size())
        return slices[hi].interpolate(x);
    if (hi == sources.size() || hi == lo)
        return slices[lo].interpolate(x);
    const double theta = (y - sources[lo]) / (sources[hi] - sources[lo]);
    return (1.0 - theta) * slices[lo].interpolate(x) + theta * slices[hi].interpolate(x);
}

KernelTable tabulate_kernel(const VelocityField& v, double D, const GridFunction& grid,
                            const std::vector<double>& sources, double t, double dt)
{
    KernelTable table;
    table.t = t;
    for (double y : sources) {
        FPProblem prob;
        prob.v = v;
        prob.D = D;
        prob.f0 = hat_delta(grid, y);
        prob.output_times = {t};
        prob.dt = dt;
        table.sources.push_back(y);
        table.slices.push_back(evolve_fp(prob).frames.back());
    }
    return table;
}

void write_trajectory_csv(std::ostream& out, const FPTrajectory& traj)
{
    const auto old = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "t,x,f\n";
    for (std::size_t n = 0; n < traj.frames.size(); ++n) {
        for (const auto& s : traj.frames[n].segments())
            for (std::size_t i = 0; i < s.size(); ++i)
                out << traj.times[n] << ',' << s.x[i] << ',' << s.values[i] << '\n';
    }
    out.precision(old);
}

std::vector<TrajectoryFrame> read_trajectory_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,f", 0) != 0)
        throw DomainError("csv", "expected header 't,x,f'");
    std::vector<TrajectoryFrame> frames;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double t = 0, x = 0, f = 0;
        char c1 = 0, c2 = 0;
        if (!(ss >> t >> c1 >> x >> c2 >> f) || c1 != ',' || c2 != ',')
            throw DomainError("csv", "malformed trajectory row at line " + std::to_string(line_no));
        if (frames.empty() || frames.back().t != t)
            frames.push_back({t, {}, {}});
        frames.back().x.push_back(x);
        frames.back().f.push_back(f);
    }
    return frames;
}

}  // namespace stochmech
