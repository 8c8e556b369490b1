#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/velocity.hpp"
#include "stochmech/spectral/sturm_liouville.hpp"

#include <json.hpp>

#include <vector>

namespace stochmech {

struct InvariantDensity {
    GridFunction density;
    /// Endpoints where exp(W/D) is not integrable; the cell quadrature then puts
    /// the mass into the end cell.
    std::vector<double> singular_ends;
};

/// h proportional to exp(W / D) on `cells` cells of `interval`, unit mass.
InvariantDensity invariant_density(const VelocityField& v, double D, const Interval& interval,
                                   std::size_t cells = 2000);

/// c_n = sum_i f0_i G_n,i / sqrt(h_i) w_i; f0 is interpolated onto the
/// decomposition grid unless it already lives there.
std::vector<double> expand_initial(const GridFunction& f0, const SpectralDecomposition& dec);

struct SpectralEvolution {
    GridFunction density;
    double max_negative = 0.0;  ///< largest negative excursion (0 when f >= 0)
    double tail_bound = 0.0;    ///< |c_last| exp(-lambda_last t) / sqrt(grid mass)
};

SpectralEvolution evolve_spectral(const SpectralDecomposition& dec, const std::vector<double>& c, double t);

/// One decomposition per inter-node interval of a stationary field.
std::vector<SpectralDecomposition> decompose(const VelocityField& v, double D, double x_max, std::size_t n_eigs,
                                             const SLOptions& options = {});

/// Spectral evolution of f0 on the whole partition (interval masses of f0 kept).
SpectralEvolution evolve_spectral(const std::vector<SpectralDecomposition>& decs, const GridFunction& f0, double t);

/// {interval, eigenvalues[], mass, grid[], eigenfunctions[][]}
nlohmann::json to_json(const SpectralDecomposition& dec);

}  // namespace stochmech
