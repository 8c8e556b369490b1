#pragma once

#include "stochmech/core/params.hpp"

#include <vector>

namespace stochmech {

// Oscillator-unit versions (x in sigma0, energies in hbar*omega).
namespace ho {

/// phi_n at xi = x/sigma0, normalised so that the integral over xi of phi_n^2 is 1.
double eigenfunction(int n, double xi);

/// d/dxi phi_n.
double eigenfunction_derivative(int n, double xi);

/// log|phi_n(xi)|; -inf at a node.
double log_abs_eigenfunction(int n, double xi);

/// Zeros of phi_n in ascending order (n of them).
std::vector<double> nodes(int n);

/// Forward velocity 2 phi_n'/phi_n of the stationary state n (D = 1).
double velocity(int n, double xi);

/// Derivative of the stationary velocity.
double velocity_derivative(int n, double xi);

/// Drift potential W = 2 log|phi_n| (so velocity = dW/dxi), up to a constant.
double drift_potential(int n, double xi);

}  // namespace ho

/// phi_n(x) in physical units (1/sqrt(length)).
double ho_eigenfunction(int n, double x, const PhysicalParams& p);

/// E_n = hbar omega (n + 1/2).
double ho_energy(int n, const PhysicalParams& p);

/// The oscillator potential m omega^2 x^2 / 2.
double ho_potential(double x, const PhysicalParams& p);

}  // namespace stochmech
