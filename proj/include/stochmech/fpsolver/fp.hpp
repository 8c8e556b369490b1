#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/velocity.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace stochmech {

/// Forward Fokker-Planck problem in oscillator units.
struct FPProblem {
    VelocityField v;
    double D = 1.0;
    GridFunction f0;  ///< on the solver grid (see fp_grid); its segments are the intervals
    double t0 = 0.0;
    std::vector<double> output_times;
    double dt = 1e-2;  ///< upper bound; refined for positivity
};

struct FPTrajectory {
    std::vector<double> times;
    std::vector<GridFunction> frames;
    std::vector<double> initial_masses;  ///< per interval, at t0
    double max_mass_drift = 0.0;         ///< largest per-interval mass change over all steps
    std::size_t steps = 0;
};

/// Cell-centred grid over the inter-node partition of v, cut at +-x_max.
GridFunction fp_grid(const VelocityField& v, double x_max, std::size_t grid_points);

/// Crank-Nicolson with exponentially fitted fluxes; zero flux at every
/// interval end. The drift of time-dependent fields is frozen at mid-step.
FPTrajectory evolve_fp(const FPProblem& problem);

/// Unit-mass cloud-in-cell impulse at x0 on the grid of `grid`. A point exactly
/// on a node shares its mass equally between the two neighbouring end cells.
GridFunction hat_delta(const GridFunction& grid, double x0);

/// Integral of |f - g|; throws on mismatched grids.
double l1_distance(const GridFunction& f, const GridFunction& g);

/// Discrete fluxes at the two ends of every interval for the generator at time t
/// (identically zero for this scheme; exposed for verification).
std::vector<double> boundary_fluxes(const VelocityField& v, double D, const GridFunction& f, double t);

using TransitionKernel = std::function<double(double x, double y)>;

/// f(x) = sum_j p(x, y_j) f0(y_j) w_j on f0's grid. Each source column with
/// f0 > 0 must carry unit mass within `mass_tol`.
GridFunction chapman_kolmogorov(const TransitionKernel& p, const GridFunction& f0, double mass_tol = 1e-3);

/// Kernel at a fixed time tabulated by FP runs from hat impulses at `sources`,
/// interpolated linearly between sources of the same interval.
struct KernelTable {
    double t = 0.0;
    std::vector<double> sources;
    std::vector<GridFunction> slices;

    double operator()(double x, double y) const;
};

KernelTable tabulate_kernel(const VelocityField& v, double D, const GridFunction& grid,
                            const std::vector<double>& sources, double t, double dt = 1e-2);

/// CSV frames `t,x,f`.
void write_trajectory_csv(std::ostream& out, const FPTrajectory& traj);

struct TrajectoryFrame {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> f;
};
std::vector<TrajectoryFrame> read_trajectory_csv(std::istream& in);

}  // namespace stochmech
