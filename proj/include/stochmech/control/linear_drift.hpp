#pragma once

#include "stochmech/core/params.hpp"
#include "stochmech/core/velocity.hpp"

#include <functional>
#include <vector>

namespace stochmech {

struct GaussianMoments {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Mean and variance of the Gaussian solution under the drift A(t) + B(t) x:
/// mu' - B mu = A, nu' - 2 B nu = 2D, integrated with an adaptive
/// Dormand-Prince pair and reported at the (ascending) times.
GaussianMoments linear_drift_moments(const std::function<double(double)>& A, const std::function<double(double)>& B,
                                     double mu0, double nu0, double D, const std::vector<double>& times,
                                     double rel_tol = 1e-12);

/// Density, phase and drift of one state at a fixed time (physical units).
struct QuantumStateFV {
    std::function<double(double)> f;
    std::function<double(double)> S;
    std::function<double(double)> v;
};

/// The undamped coherent packet of displacement a at time t.
QuantumStateFV coherent_packet(double a, double t, const PhysicalParams& p);

/// A(t) = a omega (cos omega t - sin omega t) F(t) of the packet-to-ground switch.
double transition_amplitude(double t, double a, double tau, int N, const PhysicalParams& p);

/// v = A(t) - omega x (physical units).
VelocityField transition_drift(double a, double tau, int N, const PhysicalParams& p);

}  // namespace stochmech
