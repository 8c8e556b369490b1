#include "stochmech/core/hermite.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace stochmech {

namespace ho {

namespace {

constexpr double direct_limit = 8.0;

void check_order(int n)
{
    if (n < 0)
        throw DomainError("n", "quantum number must be non-negative");
}

// Polynomial part of the orthonormal Hermite functions in u = xi/sqrt(2):
// psi_k(u) = pi^{-1/4} e^{-u^2/2} p_k(u) * exp(log_scale). Rescaled on the fly,
// so p_{n-1}/p_n is always available without overflow.
struct HermiteRecurrence {
    double p_prev = 0.0;  // p_{n-1}
    double p = 1.0;       // p_n
    double log_scale = 0.0;

    HermiteRecurrence(int n, double u)
    {
        for (int k = 0; k < n; ++k) {
            const double kk = static_cast<double>(k);
            const double next = std::sqrt(2.0 / (kk + 1.0)) * u * p - std::sqrt(kk / (kk + 1.0)) * p_prev;
            p_prev = p;
            p = next;
            if (std::abs(p) > 1e150) {
                p *= 1e-150;
                p_prev *= 1e-150;
                log_scale += 150.0 * std::numbers::ln10;
            }
        }
    }
};

const double log_norm = -0.25 * std::log(std::numbers::pi) - 0.25 * std::numbers::ln2;

}  // namespace

double log_abs_eigenfunction(int n, double xi)
{
    check_order(n);
    const double u = xi / std::numbers::sqrt2;
    const HermiteRecurrence r(n, u);
    if (r.p == 0.0)
        return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(r.p)) + r.log_scale - 0.5 * u * u + log_norm;
}

double eigenfunction(int n, double xi)
{
    check_order(n);
    const double u = xi / std::numbers::sqrt2;
    if (std::abs(xi) <= direct_limit) {
        const HermiteRecurrence r(n, u);
        return r.p * std::exp(r.log_scale - 0.5 * u * u + log_norm);
    }
    const HermiteRecurrence r(n, u);
    if (r.p == 0.0)
        return 0.0;
    const double la = std::log(std::abs(r.p)) + r.log_scale - 0.5 * u * u + log_norm;
    if (la < std::log(std::numeric_limits<double>::min()))
        return 0.0;
    return std::copysign(std::exp(la), r.p);
}

double eigenfunction_derivative(int n, double xi)
{
    check_order(n);
    // psi_n'(u) = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}; d/dxi = d/du / sqrt(2).
    const double nn = static_cast<double>(n);
    const double lower = n > 0 ? std::sqrt(nn / 2.0) * eigenfunction(n - 1, xi) : 0.0;
    const double upper = std::sqrt((nn + 1.0) / 2.0) * eigenfunction(n + 1, xi);
    return (lower - upper) / std::numbers::sqrt2;
}

std::vector<double> nodes(int n)
{
    check_order(n);
    if (n == 0)
        return {};
    // Golub-Welsch: zeros of H_n are the eigenvalues of the Jacobi matrix.
    linalg::SymTridiagonal j;
    j.diag.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n; ++k)
        j.off.push_back(std::sqrt(static_cast<double>(k) / 2.0));
    auto u = linalg::eigenvalues(j, 0, static_cast<std::size_t>(n));
    for (double& x : u)
        x *= std::numbers::sqrt2;
    if (n % 2 == 1)
        u[static_cast<std::size_t>(n / 2)] = 0.0;
    return u;
}

double velocity(int n, double xi)
{
    check_order(n);
    if (n == 0)
        return -xi;
    const HermiteRecurrence r(n, xi / std::numbers::sqrt2);
    return -xi + 2.0 * std::sqrt(static_cast<double>(n)) * r.p_prev / r.p;
}

double velocity_derivative(int n, double xi)
{
    // Riccati form of D phi'' = (V - E) phi / hbar in oscillator units.
    const double v = velocity(n, xi);
    return 0.5 * xi * xi - 2.0 * n - 1.0 - 0.5 * v * v;
}

double drift_potential(int n, double xi)
{
    return 2.0 * log_abs_eigenfunction(n, xi);
}

}  // namespace ho

double ho_eigenfunction(int n, double x, const PhysicalParams& p)
{
    return ho::eigenfunction(n, p.to_adim_x(x)) / std::sqrt(p.sigma0);
}

double ho_energy(int n, const PhysicalParams& p)
{
    if (n < 0)
        throw DomainError("n", "quantum number must be non-negative");
    return p.action * p.omega * (static_cast<double>(n) + 0.5);
}

double ho_potential(double x, const PhysicalParams& p)
{
    return 0.5 * p.mass * p.omega * p.omega * x * x;
}

}  // namespace stochmech
