#include "stochmech/core/tridiagonal.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stochmech::linalg {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double pivot_floor(const SymTridiagonal& t)
{
    double m = 1.0;
    for (double e : t.off)
        m = std::max(m, e * e);
    return m * std::numeric_limits<double>::min();
}

std::pair<double, double> gershgorin(const SymTridiagonal& t)
{
    const std::size_t n = t.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double pad = eps * std::max(std::abs(lo), std::abs(hi)) * static_cast<double>(n) + eps;
    return {lo - pad, hi + pad};
}

std::size_t count_below(const SymTridiagonal& t, double x, double pivmin)
{
    std::size_t count = 0;
    double q = t.diag[0] - x;
    if (std::abs(q) < pivmin)
        q = -pivmin;
    if (q < 0.0)
        ++count;
    for (std::size_t i = 1; i < t.size(); ++i) {
        q = (t.diag[i] - x) - t.off[i - 1] * t.off[i - 1] / q;
        if (std::abs(q) < pivmin)
            q = -pivmin;
        if (q < 0.0)
            ++count;
    }
    return count;
}

// LU with partial pivoting of a general tridiagonal matrix (LAPACK dgttrf layout).
struct TridiagonalLU {
    std::vector<double> dl, d, du, du2;
    std::vector<std::size_t> ipiv;

    TridiagonalLU(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup, double tiny)
        : dl(std::move(sub)), d(std::move(diag)), du(std::move(sup))
    {
        const std::size_t n = d.size();
        ipiv.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            ipiv[i] = i;
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0)
                    d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                ipiv[i] = i + 1;
            }
        }
        for (double& p : d) {
            if (p == 0.0)
                p = tiny;
        }
    }

    void solve(std::vector<double>& b) const
    {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (ipiv[i] == i) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1)
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t k = n - 2; k-- > 0;)
            b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
    }
};

double norm2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

void normalise(std::vector<double>& v)
{
    const double n = norm2(v);
    if (n == 0.0 || !std::isfinite(n))
        throw NumericalError("inverse iteration produced a degenerate vector");
    for (double& x : v)
        x /= n;
}

void orthogonalise(std::vector<double>& v, const std::vector<std::vector<double>>& basis,
                   std::span<const std::size_t> against)
{
    for (std::size_t j : against) {
        const auto& u = basis[j];
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            dot += u[i] * v[i];
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] -= dot * u[i];
    }
}

std::vector<double> iterate(const SymTridiagonal& t, double lambda, const std::vector<std::vector<double>>& basis,
                            std::span<const std::size_t> cluster)
{
    const std::size_t n = t.size();
    if (n == 1)
        return {1.0};
    auto [lo, hi] = gershgorin(t);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i)
        diag[i] = t.diag[i] - lambda;
    const TridiagonalLU lu(t.off, diag, t.off, eps * scale);

    // Deterministic start vector with components in every eigen-direction.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i) + 0.7);
    orthogonalise(v, basis, cluster);
    normalise(v);
    for (int it = 0; it < 4; ++it) {
        lu.solve(v);
        orthogonalise(v, basis, cluster);
        normalise(v);
    }
    return v;
}

}  // namespace

std::size_t sturm_count(const SymTridiagonal& t, double x)
{
    if (t.size() == 0)
        return 0;
    return count_below(t, x, pivot_floor(t));
}

std::vector<double> eigenvalues(const SymTridiagonal& t, std::size_t first, std::size_t count, double abs_tol)
{
    const std::size_t n = t.size();
    if (n == 0 || t.off.size() + 1 != n)
        throw DomainError("matrix", "inconsistent tridiagonal dimensions");
    if (first + count > n)
        throw DomainError("count", "requested more eigenvalues than the matrix order");

    const double pivmin = pivot_floor(t);
    const auto [glo, ghi] = gershgorin(t);
    std::vector<double> out;
    out.reserve(count);
    double floor = glo;
    for (std::size_t k = first; k < first + count; ++k) {
        double lo = floor;
        double hi = ghi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + abs_tol + pivmin)
                break;
            if (count_below(t, mid, pivmin) > k)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
        floor = lo;
    }
    return out;
}

std::vector<double> inverse_iteration(const SymTridiagonal& t, double lambda)
{
    return iterate(t, lambda, {}, {});
}

EigenPairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t count)
{
    EigenPairs out;
    out.values = eigenvalues(t, 0, count);
    const auto [lo, hi] = gershgorin(t);
    const double cluster_tol = 1e-7 * std::max(std::abs(lo), std::abs(hi));
    out.vectors.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<std::size_t> cluster;
        for (std::size_t j = 0; j < k; ++j) {
            if (std::abs(out.values[k] - out.values[j]) < cluster_tol)
                cluster.push_back(j);
        }
        out.vectors.push_back(iterate(t, out.values[k], out.vectors, cluster));
    }
    return out;
}

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs)
{
    const std::size_t n = diag.size();
    if (rhs.size() != n || sub.size() + 1 != n || sup.size() + 1 != n)
        throw DomainError("matrix", "inconsistent tridiagonal dimensions");
    std::vector<double> c(n), x(rhs.begin(), rhs.end());
    double beta = diag[0];
    if (beta == 0.0)
        throw NumericalError("zero pivot in tridiagonal solve");
    x[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i - 1] * c[i];
        if (beta == 0.0)
            throw NumericalError("zero pivot in tridiagonal solve");
        x[i] = (x[i] - sub[i - 1] * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= c[i + 1] * x[i + 1];
    return x;
}

}  // namespace stochmech::linalg
