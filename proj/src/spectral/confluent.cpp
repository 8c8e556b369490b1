#include "stochmech/spectral/confluent.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stochmech {

namespace {

using real = long double;

constexpr real tiny = std::numeric_limits<real>::epsilon();

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::round(x);
}

struct SeriesResult {
    real value = 0;
    real derivative = 0;
    real largest_term = 0;
    bool converged = false;
};

// Kahan-summed power series for M and M' together.
SeriesResult series(real a, real b, real z, int max_terms)
{
    SeriesResult r;
    real sum = 1, comp = 0;
    real dsum = 0, dcomp = 0;
    real term = 1;  // a_(k) / b_(k) z^k / k!
    r.largest_term = 1;
    for (int k = 0; k < max_terms; ++k) {
        const real kk = k;
        const real ratio = (a + kk) / (b + kk);
        // derivative term k: (a)_{k+1}/(b)_{k+1} z^k / k!
        const real dterm = term * ratio;
        {
            const real y = dterm - dcomp;
            const real t = dsum + y;
            dcomp = (t - dsum) - y;
            dsum = t;
        }
        term *= ratio * z / (kk + 1);
        {
            const real y = term - comp;
            const real t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        r.largest_term = std::max(r.largest_term, std::abs(term));
        if (term == 0 || (kk > std::abs(a) && std::abs(term) <= tiny * std::abs(sum) &&
                          std::abs(dterm) <= tiny * std::abs(dsum))) {
            r.converged = true;
            break;
        }
    }
    r.value = sum;
    r.derivative = dsum;
    return r;
}

// Carries (M, M') from z0 to z1 along Kummer's equation
// z y'' + (b - z) y' - a y = 0 by local Taylor expansions.
real continue_ode(real a, real b, real z0, real y, real dy, real z1)
{
    const real slow = std::sqrt(std::max<real>(std::abs(a), 1));
    while (z0 < z1) {
        const real step = std::min({z0 / 2, real(2), std::sqrt(z0) / slow, z1 - z0});
        // c_{k+2} = [(a + k) c_k - (k + 1)(k + b - z0) c_{k+1}] / (z0 (k + 2)(k + 1))
        real c0 = y, c1 = dy;
        real val = c0 + c1 * step;
        real der = c1;
        real pow = step;  // step^{k+1}
        for (int k = 0; k < 200; ++k) {
            const real kk = k;
            const real c2 = ((a + kk) * c0 - (kk + 1) * (kk + b - z0) * c1) / (z0 * (kk + 2) * (kk + 1));
            der += (kk + 2) * c2 * pow;
            pow *= step;
            const real add = c2 * pow;
            val += add;
            c0 = c1;
            c1 = c2;
            if (k > 4 && (kk + 3) * std::abs(add) <= tiny * (std::abs(val) + std::abs(der) * step))
                break;
        }
        y = val;
        dy = der;
        z0 += step;
    }
    return y;
}

}  // namespace

double confluent_M(double a, double b, double z)
{
    if (is_nonpositive_integer(b))
        throw DomainError("b", "M(a, b; z) is undefined for b = " + std::to_string(b));
    if (!(z >= 0.0))
        throw DomainError("z", "argument must be non-negative");
    if (z == 0.0 || a == 0.0)
        return 1.0;
    if (a == b)
        return std::exp(z);

    if (is_nonpositive_integer(a) && -a <= 400.0) {
        // Terminating polynomial; still sum in extended precision.
        const auto r = series(a, b, z, static_cast<int>(-a) + 2);
        return static_cast<double>(r.value);
    }

    if (z <= 30.0) {
        const auto r = series(a, b, z, 4000);
        // Accept when cancellation leaves well over ten significant digits.
        if (r.converged && r.largest_term <= 1e6L * std::abs(r.value))
            return static_cast<double>(r.value);
    }

    const real z_start = std::min<real>(z, 0.5L / (1 + std::abs(a)));
    const auto start = series(a, b, z_start, 4000);
    if (!start.converged)
        throw NumericalError("confluent_M: start-up series failed at a = " + std::to_string(a));
    return static_cast<double>(continue_ode(a, b, z_start, start.value, start.derivative, z));
}

}  // namespace stochmech
