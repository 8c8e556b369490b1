#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/params.hpp"

#include <span>
#include <vector>

namespace stochmech {

struct HJMResidual {
    GridFunction residual;          ///< 0 at excluded points
    std::vector<double> excluded;   ///< abscissae where f vanished
    double max_abs(double keep_away_from = 0.0, std::span<const double> singular = {}) const;
    double rms() const;
};

/// Pointwise dS/dt + (dS/dx)^2 / 2m + V - (hbar^2 / 2m) R''/R with R = sqrt(f),
/// all fields on one grid. S is given at t - dt, t, t + dt; f and V at t.
HJMResidual hjm_residual(const GridFunction& f, const GridFunction& S_before, const GridFunction& S_now,
                         const GridFunction& S_after, double dt, const GridFunction& V, const PhysicalParams& p);

}  // namespace stochmech
