#include "stochmech/sde/ensemble.hpp"

#include "stochmech/core/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace stochmech {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t particle, std::uint64_t step)
    : stream_(splitmix(splitmix(seed) ^ splitmix(particle + 0x632be59bd9b4e019ULL)))
{
    set_step(step);
}

void CounterRng::set_step(std::uint64_t step)
{
    key_ = splitmix(stream_ ^ splitmix(step + 0x85157af5ULL));
    counter_ = 0;
    has_spare_ = false;
}

std::uint64_t CounterRng::next_u64()
{
    return splitmix(key_ ^ counter_++);
}

double CounterRng::uniform()
{
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

Sampler point_sampler(double x0)
{
    return [x0](CounterRng&) { return x0; };
}

Sampler gaussian_sampler(double mean, double sd)
{
    return [mean, sd](CounterRng& rng) { return mean + sd * rng.normal(); };
}

Sampler grid_sampler(const GridFunction& density)
{
    std::vector<double> cdf, lo, width;
    double total = 0.0;
    for (const auto& s : density.segments()) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            total += std::max(s.values[i], 0.0) * s.w[i];
            cdf.push_back(total);
            lo.push_back(s.x[i] - 0.5 * s.w[i]);
            width.push_back(s.w[i]);
        }
    }
    if (!(total > 0.0))
        throw DomainError("density", "sampler needs positive mass");
    for (double& c : cdf)
        c /= total;
    return [cdf, lo, width](CounterRng& rng) {
        const double u = rng.uniform();
        auto i = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        i = std::min(i, cdf.size() - 1);
        return lo[i] + width[i] * rng.uniform();
    };
}

namespace {

int interval_label(const std::vector<double>& nodes, double x)
{
    return static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
}

double node_distance(const std::vector<double>& nodes, double x)
{
    double d = std::numeric_limits<double>::infinity();
    for (double xk : nodes)
        d = std::min(d, std::abs(x - xk));
    return d;
}

}  // namespace

SDEResult simulate(const VelocityField& v, const Sampler& f0, const SDEOptions& o)
{
    if (!(o.dt > 0.0))
        throw DomainError("dt", "time step must be positive");
    if (o.n_particles < 1)
        throw DomainError("n_particles", "need at least one particle");
    if (!(o.t_end > 0.0))
        throw DomainError("t_end", "must be positive");
    if (!(o.D > 0.0))
        throw DomainError("D", "diffusion coefficient must be positive");

    std::vector<double> snaps = o.snapshot_times;
    snaps.push_back(o.t_end);
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    std::vector<std::size_t> snap_steps;
    for (double t : snaps) {
        if (t < 0.0 || t > o.t_end)
            throw DomainError("snapshot_times", "snapshot outside [0, t_end]");
        snap_steps.push_back(static_cast<std::size_t>(std::llround(t / o.dt)));
    }
    const std::size_t n_steps = snap_steps.back();

    SDEResult res;
    res.steps = n_steps;
    for (std::size_t s : snap_steps)
        res.times.push_back(static_cast<double>(s) * o.dt);
    res.snapshots.assign(snaps.size(), std::vector<double>(o.n_particles));
    res.labels.resize(o.n_particles);

    const auto& nodes = v.nodes;
    const double sqrt2D = std::sqrt(2.0 * o.D);
    const double dt_min = o.dt * 1e-6;

    for (std::size_t p = 0; p < o.n_particles; ++p) {
        CounterRng rng(o.seed, p, 0);
        double x = f0(rng);
        if (!std::isfinite(x) || (!nodes.empty() && node_distance(nodes, x) <= 1e-12 * (1.0 + std::abs(x))))
            throw DomainError("f0", "particle " + std::to_string(p) + " starts at x = " + std::to_string(x) +
                                        ", on a node or at a non-finite position");
        const int label = interval_label(nodes, x);
        res.labels[p] = label;
        std::size_t next_snap = 0;
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == 0)
            res.snapshots[next_snap++][p] = x;

        for (std::size_t step = 1; step <= n_steps; ++step) {
            rng.set_step(step);
            double t = static_cast<double>(step - 1) * o.dt;
            double remaining = o.dt;
            while (remaining > 0.0) {
                double h = remaining;
                double drift = v(x, t);
                if (!nodes.empty()) {
                    const double d = node_distance(nodes, x);
                    while (std::abs(drift) * h > 0.25 * d && h > dt_min)
                        h *= 0.5;
                    h = std::max(h, std::min(dt_min, remaining));
                }
                double proposal = 0.0;
                for (int attempt = 0;; ++attempt) {
                    proposal = x + drift * h + sqrt2D * std::sqrt(h) * rng.normal();
                    if (nodes.empty() || (interval_label(nodes, proposal) == label && node_distance(nodes, proposal) > 0.0))
                        break;
                    ++res.rejected_crossings;
                    if (attempt >= 63) {
                        proposal = x;  // stay put for this sub-step
                        break;
                    }
                }
                x = proposal;
                remaining -= h;
                t += h;
                if (remaining < 1e-15 * o.dt)
                    remaining = 0.0;
                ++res.substeps;
            }
            while (next_snap < snap_steps.size() && snap_steps[next_snap] == step)
                res.snapshots[next_snap++][p] = x;
        }
        if (interval_label(nodes, x) != label)
            ++res.label_violations;
    }
    return res;
}

double histogram_l1(const std::vector<double>& positions, const std::function<double(double)>& f,
                    const HistogramOptions& o)
{
    if (positions.empty())
        throw DomainError("ensemble", "empty ensemble");
    if (o.bins < 1 || !(o.hi > o.lo))
        throw DomainError("bins", "invalid binning");
    const double bw = (o.hi - o.lo) / static_cast<double>(o.bins);
    std::vector<double> counts(o.bins, 0.0);
    for (double x : positions) {
        if (x < o.lo || x >= o.hi)
            continue;
        const auto b = std::min(static_cast<std::size_t>((x - o.lo) / bw), o.bins - 1);
        counts[b] += 1.0;
    }
    const double n = static_cast<double>(positions.size());
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    double l1 = 0.0;
    for (std::size_t b = 0; b < o.bins; ++b) {
        const double a = o.lo + static_cast<double>(b) * bw;
        const double ref = Gauss::integrate(f, a, a + bw);
        l1 += std::abs(counts[b] / n - ref);
    }
    return l1;
}

void write_snapshot_csv(std::ostream& out, const SDEResult& r)
{
    const auto old = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "t,particle_id,x\n";
    for (std::size_t k = 0; k < r.times.size(); ++k)
        for (std::size_t p = 0; p < r.snapshots[k].size(); ++p)
            out << r.times[k] << ',' << p << ',' << r.snapshots[k][p] << '\n';
    out.precision(old);
}

std::vector<SnapshotRow> read_snapshot_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,particle_id,x", 0) != 0)
        throw DomainError("csv", "expected header 't,particle_id,x'");
    std::vector<SnapshotRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        SnapshotRow r{};
        if (!(ss >> r.t >> r.particle >> r.x))
            throw DomainError("csv", "malformed snapshot row at line " + std::to_string(line_no));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace stochmech
