#pragma once

#include "stochmech/core/grid.hpp"
#include "stochmech/core/hjm.hpp"
#include "stochmech/core/params.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace stochmech {

enum class ScenarioKind { ou, n1, decay, packet };

ScenarioKind parse_scenario_kind(const std::string& s);
std::string to_string(ScenarioKind k);

/// Free parameters of the closed-form controlled evolutions (physical units).
struct ScenarioOptions {
    double x0 = 1.0;   ///< kernel source point (ou, n1)
    double a = 1.0;    ///< initial packet displacement
    double tau = 1.0;  ///< switch time of the packet transition
    int N = 4;         ///< smoothing order of the packet transition
    double t_end = 20.0;
};

/// A prescribed (f, v) evolution with its gauge and closed-form controlling
/// potential. The stored functions work in oscillator units (xi = x / sigma0,
/// s = omega t, energies in hbar omega); the members below convert.
struct ControlledEvolution {
    ScenarioKind kind = ScenarioKind::ou;
    PhysicalParams params;

    std::function<double(double, double)> density;         ///< per unit xi
    std::function<double(double, double)> velocity;
    std::function<double(double, double)> drift_potential;  ///< v = dW/dxi
    std::function<double(double, double)> closed_potential;
    std::function<double(double)> theta;
    std::function<double(double)> theta_rate;

    std::vector<double> singular;  ///< xi of points to keep away from
    int half_line = 0;             ///< +1 / -1 when the density lives on one side of 0

    double f(double x, double t) const;
    double v(double x, double t) const;
    double W(double x, double t) const;
    double V(double x, double t) const;  ///< closed form
    double S(double x, double t) const;  ///< m W - (hbar/2) ln(sigma0 f) - theta
    double gauge(double t) const;
    double gauge_rate(double t) const;

    /// theta -> theta + c t (c in energy units); V shifts by c.
    ControlledEvolution with_gauge_shift(double c) const;
};

ControlledEvolution make_scenario(ScenarioKind kind, const ScenarioOptions& options, const PhysicalParams& p);

/// f = beta^2 phi_0^2 + gamma^2 phi_1^2 on `points` cells of [-x_max, x_max].
GridFunction decay_density(double t, const PhysicalParams& p, double x_max = 8.0, std::size_t points = 2000);

/// V = m omega^2 x^2 / 2 - 2 hbar omega U(x / sigma0; b). Throws at x = 0, t = 0.
double decay_potential(double x, double t, const PhysicalParams& p);

/// Controlling potential of the packet-to-ground switch.
double packet_to_ground_potential(double x, double t, double a, double tau, int N, const PhysicalParams& p);

/// Evaluation grid of a scenario: [-x_max, x_max] (or its half) with a gap of
/// radius `exclusion` around each singular point.
GridFunction scenario_grid(const ControlledEvolution& ev, double x_max, double exclusion, std::size_t points);

struct CertifyOptions {
    double x_max = 5.0;      ///< in units of sigma0
    double exclusion = 0.25; ///< in units of sigma0
    std::size_t points = 1000;
    double dt = 1e-3;        ///< frame spacing, in units of 1/omega
};

/// Everything derived for one frame, physical units.
struct FrameCheck {
    double t = 0.0;
    GridFunction f, v, S, V_synth, V_closed;
    HJMResidual residual;  ///< with the closed-form potential
    double relative_error = 0.0;  ///< sup |V_synth - V_closed| / sup |V_closed|
    std::vector<double> excluded;
};

FrameCheck certify_frame(const ControlledEvolution& ev, double t, const CertifyOptions& options = {});

/// Geometric time grid: first step dt0, growth factor per step, capped at dt_max.
std::vector<double> control_times(double t_end, double dt0 = 1e-3, double growth = 1.1, double dt_max = 0.25);

/// CSV frames `t,x,f,v,S,V` (V synthesized).
void write_control_csv(std::ostream& out, const std::vector<FrameCheck>& frames);

struct ControlRow {
    double t, x, f, v, S, V;
};
std::vector<ControlRow> read_control_csv(std::istream& in);

}  // namespace stochmech
