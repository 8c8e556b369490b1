#include "stochmech/control/linear_drift.hpp"

#include "stochmech/control/smoothing.hpp"
#include "stochmech/core/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace stochmech {

GaussianMoments linear_drift_moments(const std::function<double(double)>& A, const std::function<double(double)>& B,
                                     double mu0, double nu0, double D, const std::vector<double>& times,
                                     double rel_tol)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    if (times.empty())
        throw DomainError("times", "need at least one output time");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] >= times[i - 1]))
            throw DomainError("times", "output times must be ascending");
    }

    GaussianMoments out;
    auto rhs = [&](const State& y, State& dy, double t) {
        const double b = B(t);
        dy[0] = A(t) + b * y[0];
        dy[1] = 2.0 * b * y[1] + 2.0 * D;
    };
    auto observe = [&](const State& y, double t) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
            throw NumericalError("moment equations diverged at t = " + std::to_string(t));
        out.t.push_back(t);
        out.mean.push_back(y[0]);
        out.variance.push_back(y[1]);
    };
    State y{mu0, nu0};
    auto stepper = ode::make_dense_output(rel_tol * 1e-3, rel_tol, ode::runge_kutta_dopri5<State>());
    const double span = times.back() - times.front();
    const double dt0 = span > 0.0 ? span * 1e-4 : 1e-3;
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt0, observe);
    return out;
}

QuantumStateFV coherent_packet(double a, double t, const PhysicalParams& p)
{
    const double w = p.omega;
    const double s2 = p.sigma0 * p.sigma0;
    const double centre = a * std::cos(w * t);
    QuantumStateFV st;
    st.f = [=](double x) {
        const double d = x - centre;
        return std::exp(-0.5 * d * d / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
    };
    const double hbar = p.action;
    st.S = [=](double x) {
        return -hbar * ((4.0 * a * x * std::sin(w * t) - a * a * std::sin(2.0 * w * t)) / (8.0 * s2) + 0.5 * w * t);
    };
    st.v = [=](double x) { return a * w * (std::cos(w * t) - std::sin(w * t)) - w * x; };
    return st;
}

double transition_amplitude(double t, double a, double tau, int N, const PhysicalParams& p)
{
    const SmoothingFamily F(tau, N);
    const double wt = p.omega * t;
    return a * p.omega * (std::cos(wt) - std::sin(wt)) * F.F(t);
}

VelocityField transition_drift(double a, double tau, int N, const PhysicalParams& p)
{
    const SmoothingFamily family(tau, N);  // validates tau and N up front
    const double w = p.omega;
    auto A = [=](double t) {
        const double wt = w * t;
        return a * w * (std::cos(wt) - std::sin(wt)) * family.F(t);
    };
    return linear_velocity_field(A, -w, false);
}

}  // namespace stochmech
