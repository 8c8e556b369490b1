#pragma once

namespace stochmech {

/// F(t) = 1 - (1 - e^{-Omega t})^N with Omega = ln N / tau, a smooth switch
/// from 1 to 0 with F'(0) = 0 and an inflection at tau.
class SmoothingFamily {
public:
    SmoothingFamily(double tau, int N);

    double tau() const { return tau_; }
    int order() const { return n_; }
    double rate() const { return rate_; }
    double rate(int k) const { return k * rate_; }

    double F(double t) const;
    /// Same function as the alternating sum of (-1)^{k+1} C(N,k) e^{-k Omega t}.
    double F_binomial(double t) const;
    double dF(double t) const;
    double d2F(double t) const;

    /// (-1)^{k+1} C(N, k)
    double coefficient(int k) const;

private:
    double tau_;
    int n_;
    double rate_;
};

/// beta^2 = 1 - e^{-2 omega t}, gamma^2 = e^{-2 omega t}, b^2 = beta^2 / gamma^2.
struct DecayModel {
    double omega = 1.0;
    double beta2(double t) const;
    double gamma2(double t) const;
    double b2(double t) const;
};

/// U(x; b) = (x^4 + b^2 x^2 - b^2) / (b^2 + x^2)^2, x in units of sigma0.
double decay_shape(double xi, double b2);

/// Packet-transition coefficients in oscillator units: w = omega_k / omega,
/// s = omega t.
double packet_u_coefficient(double w, double s);
double packet_w_coefficient(double w);

}  // namespace stochmech
