#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/params.hpp"

#include <vector>

namespace stochmech {

/// A synthesized field plus the abscissae where it could not be formed
/// (vanishing density); those samples hold 0.
struct Synthesized {
    GridFunction values;
    std::vector<double> excluded;
};

/// S = m W - (hbar / 2) ln(sigma0 f) - theta, physical units.
Synthesized synthesize_phase(const GridFunction& f, const GridFunction& W, double theta, const PhysicalParams& p);

/// Prescribed evolution around one instant t, sampled on one grid:
/// density at t - dt, t, t + dt, drift potential at t -+ dt, drift at t.
struct EvolutionFrames {
    double dt = 1e-3;
    GridFunction f_before, f_now, f_after;
    GridFunction W_before, W_after;
    GridFunction v_now;
    double theta_dot = 0.0;
};

/// V = (hbar^2 / 4m) (ln f)'' + (hbar / 2)(d_t ln f + v (ln f)') - m v^2 / 2 - m d_t W + theta'
Synthesized synthesize_potential(const EvolutionFrames& frames, const PhysicalParams& p);

}  // namespace stochmech
