#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/params.hpp"

#include <functional>
#include <vector>

namespace stochmech {

/// Forward drift v(x,t) with its singular nodes. The engines use oscillator
/// units (D = 1); velocity_from_state returns whatever units it was fed.
struct VelocityField {
    std::function<double(double, double)> value;
    std::vector<double> nodes;  ///< ascending
    bool stationary = true;

    /// Optional W with v = dW/dx (enables exact drift integrals).
    std::function<double(double, double)> potential;
    /// Optional dv/dx.
    std::function<double(double, double)> derivative;

    /// Residue of the 1/(x - x_k) pole at each node (2D for quantum states).
    double node_strength = 2.0;

    double operator()(double x, double t = 0.0) const { return value(x, t); }
    bool has_potential() const { return static_cast<bool>(potential); }

    /// Inter-node intervals, the outer two cut at +-x_max.
    std::vector<Interval> partition(double x_max) const { return partition_from_nodes(nodes, x_max); }

    /// dv/dx, by the analytic derivative when present, else a central difference.
    double slope(double x, double t = 0.0) const;
};

/// v_n = 2 phi_n'/phi_n in oscillator units, with W = 2 ln|phi_n| and v_n'.
VelocityField ho_velocity_field(int n);

/// v = A(t) + B x (no nodes). W = A x + B x^2 / 2.
VelocityField linear_velocity_field(std::function<double(double)> A, double B, bool stationary = false);

/// The zero drift.
VelocityField zero_velocity_field();

/// Integral of v(., t) over [a, b] (a and b inside one inter-node interval).
/// Uses W when available; otherwise Gauss-Legendre with the pole of the
/// nearest node subtracted and integrated in closed form.
double drift_integral(const VelocityField& v, double a, double b, double t);

/// v = dS/dx / m + (hbar / 2m) d/dx ln R^2 on a sampled state, in the units of
/// the inputs. R and S share a grid; R must be non-negative. Nodes are the
/// interior segment ends plus any interior sample where R vanishes.
VelocityField velocity_from_state(const GridFunction& R, const GridFunction& S, const PhysicalParams& p);

/// The sampled velocity itself (same grid as R), as used by velocity_from_state.
GridFunction sampled_velocity(const GridFunction& R, const GridFunction& S, const PhysicalParams& p);

}  // namespace stochmech
