#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/velocity.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace stochmech {

/// -(p G')' + q G = lambda G on one inter-node interval, with constant p = D.
struct SelfAdjointOperator {
    Interval interval;
    double p = 1.0;
    std::function<double(double)> q;
    VelocityField v;  ///< kept for the flux boundary conditions and the fitted scheme
};

/// q = v^2 / 4D + v' / 2 for the stationary drift v.
SelfAdjointOperator self_adjoint_coeffs(const VelocityField& v, double D, const Interval& interval);

enum class SLScheme {
    /// Symmetric three-point differences of the operator in potential form,
    /// G = 0 at nodes and cutoffs, zero flux at regular ends (ghost points).
    potential_form,
    /// Exponentially fitted (Scharfetter-Gummel) fluxes, symmetrised; zero flux
    /// at every end, so lambda_0 = 0 and G_0 = sqrt(h) hold exactly.
    fitted_flux,
};

struct SLOptions {
    std::size_t cells = 2000;
    SLScheme scheme = SLScheme::fitted_flux;
    /// Combine cells and 2*cells eigenvalues as (4 l_2N - l_N) / 3.
    bool richardson = false;
};

struct SpectralDecomposition {
    Interval interval;
    std::vector<double> eigenvalues;
    std::vector<GridFunction> eigenfunctions;  ///< sum_i G_n G_m w_i = delta_nm
    GridFunction invariant;                    ///< h, unit mass on the interval
    double mass = 1.0;

    std::size_t count() const { return eigenvalues.size(); }
};

SpectralDecomposition solve_sturm_liouville(const SelfAdjointOperator& op, std::size_t n_eigs,
                                            const SLOptions& options = {});

/// Number of sign changes of the samples, ignoring |g| below tol * max|g|.
int sign_changes(const GridFunction& g, double tol = 1e-10);

}  // namespace stochmech
