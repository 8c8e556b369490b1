#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/params.hpp"

#include <iosfwd>
#include <vector>

namespace stochmech {

/// Mean and variance of the oscillator kernel started at x0 (physical units).
struct OUKernelParams {
    double x0 = 0.0;
    double t0 = 0.0;
    double alpha(double t, const PhysicalParams& p) const;
    double variance(double t, const PhysicalParams& p) const;
};

/// Ground-state transition density p(x, t | x0, t0).
double ou_transition(double x, double t, double x0, double t0, const PhysicalParams& p);

/// First-excited-state transition density; zero on the half-line not
/// containing x0, unit mass on the other.
double n1_transition(double x, double t, double x0, double t0, const PhysicalParams& p);

/// q Theta(x) + (2 - q) Theta(-x), with Theta(0) = 1/2.
double gamma_factor(double q, double x);

/// Gamma(q; x) phi_1(x)^2 on f0's grid, q = 2 * (share of f0's mass on x > 0),
/// scaled by the total mass of f0.
GridFunction n1_asymptotic(const GridFunction& f0, const PhysicalParams& p);

/// Fraction of the mass of f lying on x > 0, by quadrature.
double positive_mass(const GridFunction& f);

namespace ho {
// Oscillator units: s = omega (t - t0), densities per unit xi.
double ou_kernel(double xi, double s, double xi0);
double n1_kernel(double xi, double s, double xi0);
}  // namespace ho

struct KernelSample {
    double x0, x, t, p;
};

/// CSV `x0,x,t,p`.
void write_kernel_csv(std::ostream& out, const std::vector<KernelSample>& rows);
std::vector<KernelSample> read_kernel_csv(std::istream& in);

}  // namespace stochmech
