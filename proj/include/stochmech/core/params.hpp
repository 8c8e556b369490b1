#pragma once

#include <iosfwd>
#include <string>

namespace stochmech {

enum class Mode { quantum, beam };

/// Unit system of a run.
///
/// Every engine works in oscillator units: lengths in sigma0, times in 1/omega,
/// energies in hbar*omega (or emittance*omega in beam mode). In those units the
/// diffusion coefficient is 1, the mass is 1/2 and the action constant is 1.
struct PhysicalParams {
    double mass = 0.5;
    double omega = 1.0;
    double action = 1.0;  ///< hbar, or the emittance in beam mode
    Mode mode = Mode::quantum;
    double diffusion = 1.0;
    double sigma0 = 1.0;

    /// The oscillator units themselves (m = 1/2, omega = 1, hbar = 1).
    static PhysicalParams natural();

    double energy_unit() const { return action * omega; }

    double to_adim_x(double x) const { return x / sigma0; }
    double from_adim_x(double xi) const { return xi * sigma0; }
    double to_adim_t(double t) const { return t * omega; }
    double from_adim_t(double s) const { return s / omega; }
};

/// Fills D and sigma0. Beam mode fixes m = 1 and D = emittance / 2.
PhysicalParams derive_params(double mass, double omega, double action, Mode mode);

/// Flat `key = value` text with keys m, omega, hbar | emittance, mode.
PhysicalParams parse_params(std::istream& in);
PhysicalParams parse_params_text(const std::string& text);
std::string format_params(const PhysicalParams& p);

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

}  // namespace stochmech
