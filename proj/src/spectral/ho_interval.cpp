#include "stochmech/spectral/ho_interval.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/spectral/confluent.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace stochmech {

namespace {

// 1/Gamma(a), finite through the poles.
double recip_gamma(double a)
{
    if (a > 0.0)
        return 1.0 / boost::math::tgamma(a);
    return boost::math::sin_pi(a) * boost::math::tgamma(1.0 - a) / std::numbers::pi;
}

double even_solution(double a1, double xi)
{
    return std::exp(-0.25 * xi * xi) * confluent_M(a1, 0.5, 0.5 * xi * xi);
}

double odd_solution(double a2, double xi)
{
    return xi * std::exp(-0.25 * xi * xi) * confluent_M(a2, 1.5, 0.5 * xi * xi);
}

}  // namespace

double ho_interval_determinant(int n, const Interval& iv, double mu, Parity parity)
{
    const double a1 = -0.5 * (mu + n);
    const double a2 = a1 + 0.5;
    const bool open_lo = iv.lo_kind == EndKind::truncated;
    const bool open_hi = iv.hi_kind == EndKind::truncated;

    if (parity != Parity::any) {
        if (std::abs(iv.lo + iv.hi) > 1e-12 * (1.0 + std::abs(iv.hi)))
            throw DomainError("parity", "parity sectors need an interval symmetric about 0");
        if (open_hi)
            return parity == Parity::even ? recip_gamma(a1) : recip_gamma(a2);
        return parity == Parity::even ? even_solution(a1, iv.hi) : odd_solution(a2, iv.hi);
    }

    if (open_lo && open_hi)
        return recip_gamma(a1) * recip_gamma(a2);
    if (open_hi) {
        // Solution decaying at +infinity, forced to vanish at lo.
        return recip_gamma(a2) * even_solution(a1, iv.lo) / std::numbers::sqrt2 -
               recip_gamma(a1) * odd_solution(a2, iv.lo);
    }
    if (open_lo) {
        return recip_gamma(a2) * even_solution(a1, iv.hi) / std::numbers::sqrt2 +
               recip_gamma(a1) * odd_solution(a2, iv.hi);
    }
    return even_solution(a1, iv.lo) * odd_solution(a2, iv.hi) - even_solution(a1, iv.hi) * odd_solution(a2, iv.lo);
}

std::vector<double> ho_interval_eigenvalues(int n, const Interval& iv, std::size_t count, Parity parity)
{
    if (n < 0)
        throw DomainError("n", "quantum number must be non-negative");
    if (count < 1)
        throw DomainError("count", "need at least one eigenvalue");

    const auto det = [&](double mu) { return ho_interval_determinant(n, iv, mu, parity); };
    std::vector<double> roots;
    std::ostringstream trace;
    const double step = 0.02;
    const double mu_max = 320.0;  // keeps Gamma(1 - a) finite
    double lo = -0.25;
    double f_lo = det(lo);
    while (roots.size() < count && lo < mu_max) {
        const double hi = lo + step;
        const double f_hi = det(hi);
        if (f_lo == 0.0) {
            roots.push_back(lo);
        } else if (f_lo * f_hi < 0.0) {
            boost::uintmax_t iters = 100;
            const auto tol = boost::math::tools::eps_tolerance<double>(50);
            const auto r = boost::math::tools::toms748_solve(det, lo, hi, f_lo, f_hi, tol, iters);
            if (iters >= 100) {
                trace << "no convergence in [" << lo << ", " << hi << "]; ";
                throw NumericalError("ho_interval_eigenvalues: " + trace.str());
            }
            const double root = 0.5 * (r.first + r.second);
            roots.push_back(std::abs(root) < 1e-12 ? 0.0 : root);
            trace << "bracket [" << lo << ", " << hi << "] -> " << root << "; ";
        }
        lo = hi;
        f_lo = f_hi;
    }
    if (roots.size() < count) {
        throw NumericalError("ho_interval_eigenvalues: found " + std::to_string(roots.size()) + " of " +
                             std::to_string(count) + " roots below mu = " + std::to_string(mu_max) + "; " +
                             trace.str());
    }
    return roots;
}

}  // namespace stochmech
