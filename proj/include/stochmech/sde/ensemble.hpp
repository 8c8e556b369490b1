#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/velocity.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace stochmech {

/// Counter-based normal/uniform stream: every draw is a pure function of
/// (seed, particle, step, counter), so results never depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t particle, std::uint64_t step = 0);

    void set_step(std::uint64_t step);

    std::uint64_t next_u64();
    double uniform();  ///< in (0, 1)
    double normal();

private:
    std::uint64_t stream_;  ///< hash of (seed, particle)
    std::uint64_t key_;     ///< hash of (stream, step)
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Draws an initial position for one particle.
using Sampler = std::function<double(CounterRng&)>;

Sampler point_sampler(double x0);
Sampler gaussian_sampler(double mean, double sd);
/// Piecewise-constant density of the grid function (cell by cell).
Sampler grid_sampler(const GridFunction& density);

struct SDEOptions {
    double D = 1.0;
    double dt = 1e-3;
    std::size_t n_particles = 1000;
    double t_end = 1.0;
    std::uint64_t seed = 1;
    std::vector<double> snapshot_times;  ///< t_end is always recorded
};

struct SDEResult {
    std::vector<double> times;
    std::vector<std::vector<double>> snapshots;  ///< [time][particle]
    std::vector<int> labels;                     ///< starting interval of each particle
    std::size_t steps = 0;
    std::size_t substeps = 0;
    std::size_t rejected_crossings = 0;  ///< proposals that crossed a node and were redrawn
    std::size_t label_violations = 0;    ///< particles that ended outside their interval
};

/// Euler-Maruyama for dx = v dt + sqrt(2D) dW. Near a node the step is cut
/// geometrically until |v| dt_sub <= d_node / 4 (floor dt * 1e-6); proposals
/// that cross a node are rejected and redrawn.
SDEResult simulate(const VelocityField& v, const Sampler& f0, const SDEOptions& options);

struct HistogramOptions {
    std::size_t bins = 200;
    double lo = -6.0;
    double hi = 6.0;
};

/// Sum over bins of |histogram density - bin average of f| times the bin width.
double histogram_l1(const std::vector<double>& positions, const std::function<double(double)>& f_reference,
                    const HistogramOptions& options = {});

/// CSV `t,particle_id,x`.
void write_snapshot_csv(std::ostream& out, const SDEResult& result);

struct SnapshotRow {
    double t;
    std::size_t particle;
    double x;
};
std::vector<SnapshotRow> read_snapshot_csv(std::istream& in);

}  // namespace stochmech
