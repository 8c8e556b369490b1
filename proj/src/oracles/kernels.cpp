#include "stochmech/oracles/kernels.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace stochmech {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void check_time(double s)
{
    if (!(s > 0.0))
        throw DomainError("t", "transition density needs t > t0");
}

}  // namespace

double OUKernelParams::alpha(double t, const PhysicalParams& p) const
{
    return x0 * std::exp(-p.omega * (t - t0));
}

double OUKernelParams::variance(double t, const PhysicalParams& p) const
{
    return p.sigma0 * p.sigma0 * -std::expm1(-2.0 * p.omega * (t - t0));
}

namespace ho {

double ou_kernel(double xi, double s, double xi0)
{
    check_time(s);
    const double alpha = xi0 * std::exp(-s);
    const double var = -std::expm1(-2.0 * s);
    const double d = xi - alpha;
    return std::exp(-0.5 * d * d / var) * inv_sqrt_2pi / std::sqrt(var);
}

double n1_kernel(double xi, double s, double xi0)
{
    check_time(s);
    if (xi0 == 0.0)
        throw DomainError("x0", "the kernel is undefined at the node x0 = 0");
    if (xi * xi0 <= 0.0)
        return 0.0;
    const double alpha = xi0 * std::exp(-s);
    const double var = -std::expm1(-2.0 * s);
    const double sigma = std::sqrt(var);
    const double y = xi * alpha / var;  // >= 0 on the allowed half-line
    const double d = xi - alpha;
    // (x/alpha)(F - G) = (x/alpha) e^{-(x-alpha)^2/2s^2} (1 - e^{-2y})
    double factor;
    if (y < 1e-6)
        factor = 2.0 * xi * xi / var * (1.0 - y + 2.0 * y * y / 3.0);
    else
        factor = xi / alpha * -std::expm1(-2.0 * y);
    return factor * std::exp(-0.5 * d * d / var) * inv_sqrt_2pi / sigma;
}

}  // namespace ho

double ou_transition(double x, double t, double x0, double t0, const PhysicalParams& p)
{
    return ho::ou_kernel(p.to_adim_x(x), p.to_adim_t(t - t0), p.to_adim_x(x0)) / p.sigma0;
}

double n1_transition(double x, double t, double x0, double t0, const PhysicalParams& p)
{
    return ho::n1_kernel(p.to_adim_x(x), p.to_adim_t(t - t0), p.to_adim_x(x0)) / p.sigma0;
}

double gamma_factor(double q, double x)
{
    if (!(q >= 0.0 && q <= 2.0))
        throw DomainError("q", "mass share must lie in [0, 2]");
    if (x > 0.0)
        return q;
    if (x < 0.0)
        return 2.0 - q;
    return 1.0;
}

double positive_mass(const GridFunction& f)
{
    double m = 0.0;
    for (const auto& s : f.segments())
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.x[i] > 0.0)
                m += s.w[i] * s.values[i];
    const double total = f.integral();
    if (!(total > 0.0))
        throw DomainError("f0", "density has no mass");
    return m / total;
}

GridFunction n1_asymptotic(const GridFunction& f0, const PhysicalParams& p)
{
    const double total = f0.integral();
    const double q = std::clamp(2.0 * positive_mass(f0), 0.0, 2.0);
    return f0.map([&](double x, double) {
        const double phi = ho_eigenfunction(1, x, p);
        return total * gamma_factor(q, x) * phi * phi;
    });
}

void write_kernel_csv(std::ostream& out, const std::vector<KernelSample>& rows)
{
    const auto old = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "x0,x,t,p\n";
    for (const auto& r : rows)
        out << r.x0 << ',' << r.x << ',' << r.t << ',' << r.p << '\n';
    out.precision(old);
}

std::vector<KernelSample> read_kernel_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("x0,x,t,p", 0) != 0)
        throw DomainError("csv", "expected header 'x0,x,t,p'");
    std::vector<KernelSample> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        KernelSample r{};
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(ss >> r.x0 >> c1 >> r.x >> c2 >> r.t >> c3 >> r.p) || c1 != ',' || c2 != ',' || c3 != ',')
            throw DomainError("csv", "malformed kernel row at line " + std::to_string(line_no));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace stochmech
