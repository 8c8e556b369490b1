#include "stochmech/control/smoothing.hpp"

#include "stochmech/core/errors.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <cmath>

namespace stochmech {

SmoothingFamily::SmoothingFamily(double tau, int N) : tau_(tau), n_(N)
{
    if (!(tau > 0.0))
        throw DomainError("tau", "transition time must be positive");
    if (N < 2)
        throw DomainError("N", "the smoothing order requires N >= 2 so that F'(0) = 0");
    rate_ = std::log(static_cast<double>(N)) / tau;
}

double SmoothingFamily::coefficient(int k) const
{
    const double c = boost::math::binomial_coefficient<double>(static_cast<unsigned>(n_), static_cast<unsigned>(k));
    return k % 2 == 1 ? c : -c;
}

double SmoothingFamily::F(double t) const
{
    const double u = -std::expm1(-rate_ * t);
    return 1.0 - std::pow(u, n_);
}

double SmoothingFamily::F_binomial(double t) const
{
    double sum = 0.0;
    for (int k = 1; k <= n_; ++k)
        sum += coefficient(k) * std::exp(-rate(k) * t);
    return sum;
}

double SmoothingFamily::dF(double t) const
{
    const double u = -std::expm1(-rate_ * t);
    return -n_ * rate_ * (1.0 - u) * std::pow(u, n_ - 1);
}

double SmoothingFamily::d2F(double t) const
{
    const double u = -std::expm1(-rate_ * t);
    return -n_ * rate_ * rate_ * (1.0 - u) * std::pow(u, n_ - 2) * ((n_ - 1) - n_ * u);
}

double DecayModel::beta2(double t) const
{
    return -std::expm1(-2.0 * omega * t);
}

double DecayModel::gamma2(double t) const
{
    return std::exp(-2.0 * omega * t);
}

double DecayModel::b2(double t) const
{
    return std::expm1(2.0 * omega * t);
}

double decay_shape(double xi, double b2)
{
    const double x2 = xi * xi;
    const double den = b2 + x2;
    return (x2 * x2 + b2 * x2 - b2) / (den * den);
}

double packet_u_coefficient(double w, double s)
{
    const double den = (w - 1.0) * (w - 1.0) + 1.0;
    return std::sin(s) + (2.0 * std::sin(s) - w * w * std::cos(s)) / den;
}

double packet_w_coefficient(double w)
{
    const double den = (w - 1.0) * (w - 1.0) + 1.0;
    return 1.0 + (2.0 - w * w) / den;
}

}  // namespace stochmech
