#pragma once

// Reference values computed without the library: quad-precision series,
// explicit polynomials, and constants frozen from 50-digit evaluations.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Kummer M(a, b; z) by its power series in __float128. Fine for the modest z
/// the tests use (the terms stay far below 1e30).
inline double kummer_series(double a, double b, double z)
{
    __float128 term = 1, sum = 1;
    const __float128 A = a, B = b, Z = z;
    for (int k = 0; k < 4000; ++k) {
        term *= (A + k) / (B + k) * Z / (k + 1);
        sum += term;
        const double t = static_cast<double>(term < 0 ? -term : term);
        const double s = static_cast<double>(sum < 0 ? -sum : sum);
        if (t < 1e-34 * s && k > static_cast<int>(z) + 10)
            break;
    }
    return static_cast<double>(sum);
}

/// Brent-free bisection on a sign change of `f` in [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi)
{
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Eigenvalues of the n = 2 drift on [-1, 1] (units of omega), mpmath 50 digits.
/// Odd sector: zeros of M(-(mu+1)/2, 3/2; 1/2); even: zeros of M(-(mu+2)/2, 1/2; 1/2).
inline const std::vector<double> n2_odd_mu{7.44020289219126, 37.0586039717226, 86.4083781156619};
inline const std::vector<double> n2_even_mu{0.0, 19.7843288293411, 59.2663503118268};
/// Eigenvalues on the half-interval [1, 12) of the n = 2 drift, mpmath.
inline const std::vector<double> n2_outer_mu{0.0, 2.40113160147, 4.70048176550, 6.94974274266};

/// Orthonormal oscillator eigenfunctions in xi = x / sigma0 (phi_0 ~ exp(-xi^2/4)),
/// written out for n <= 3.
inline double phi(int n, double xi)
{
    const double g = std::exp(-0.25 * xi * xi) / std::sqrt(std::sqrt(2.0 * std::numbers::pi));
    switch (n) {
    case 0: return g;
    case 1: return g * xi;
    case 2: return g * (xi * xi - 1.0) / std::sqrt(2.0);
    case 3: return g * (xi * xi * xi - 3.0 * xi) / std::sqrt(6.0);
    default: return std::nan("");
    }
}

/// Ornstein-Uhlenbeck transition density in oscillator units (D = 1, v = -xi).
inline double ou(double xi, double s, double xi0)
{
    const double m = xi0 * std::exp(-s);
    const double var = 1.0 - std::exp(-2.0 * s);
    return std::exp(-0.5 * (xi - m) * (xi - m) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

/// Transition density of the n = 1 drift, by the image construction
/// p = (x / x0) e^{s} [ou(x | x0) - ou(x | -x0)] on the side of x0.
inline double n1(double xi, double s, double xi0)
{
    if (xi * xi0 <= 0.0)
        return 0.0;
    return (xi / xi0) * std::exp(s) * (ou(xi, s, xi0) - ou(xi, s, -xi0));
}

/// Simpson's rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 4000)
{
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
