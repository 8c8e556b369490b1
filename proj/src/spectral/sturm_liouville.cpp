#include "stochmech/spectral/sturm_liouville.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/tridiagonal.hpp"
#include "stochmech/spectral/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochmech {

SelfAdjointOperator self_adjoint_coeffs(const VelocityField& v, double D, const Interval& interval)
{
    if (!(D > 0.0))
        throw DomainError("D", "diffusion coefficient must be positive");
    SelfAdjointOperator op;
    op.interval = interval;
    op.p = D;
    op.v = v;
    op.q = [v, D](double x) {
        const double u = v(x);
        return u * u / (4.0 * D) + 0.5 * v.slope(x);
    };
    return op;
}

namespace {

// Bernoulli function z / (e^z - 1), with B(0) = 1.
double bernoulli(double z)
{
    if (std::abs(z) < 1e-8)
        return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

std::vector<double> cell_centres(const Interval& iv, std::size_t n)
{
    const double h = iv.length() / static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = iv.lo + (static_cast<double>(i) + 0.5) * h;
    return x;
}

double ghost_ratio(const SelfAdjointOperator& op, double h, bool left)
{
    const EndKind kind = left ? op.interval.lo_kind : op.interval.hi_kind;
    if (kind != EndKind::regular)
        return -1.0;  // G = 0 at nodes and at cutoffs
    const double D = op.p;
    const double va = op.v(left ? op.interval.lo : op.interval.hi);
    // D G' = (v/2) G on the face, with the ghost value reflected through it.
    if (left)
        return (2.0 * D / h - 0.5 * va) / (2.0 * D / h + 0.5 * va);
    return (2.0 * D / h + 0.5 * va) / (2.0 * D / h - 0.5 * va);
}

linalg::SymTridiagonal potential_form_matrix(const SelfAdjointOperator& op, const std::vector<double>& x, double h)
{
    const std::size_t n = x.size();
    const double D = op.p;
    linalg::SymTridiagonal t;
    t.diag.resize(n);
    t.off.assign(n - 1, -D / (h * h));
    for (std::size_t i = 0; i < n; ++i)
        t.diag[i] = 2.0 * D / (h * h) + op.q(x[i]);
    t.diag.front() -= D / (h * h) * ghost_ratio(op, h, true);
    t.diag.back() -= D / (h * h) * ghost_ratio(op, h, false);
    return t;
}

linalg::SymTridiagonal fitted_flux_matrix(const SelfAdjointOperator& op, const std::vector<double>& x, double h)
{
    const std::size_t n = x.size();
    const double D = op.p;
    const double k = D / (h * h);
    linalg::SymTridiagonal t;
    t.diag.assign(n, 0.0);
    t.off.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = drift_integral(op.v, x[i], x[i + 1], 0.0) / D;
        const double up = k * bernoulli(-w);
        const double down = k * bernoulli(w);
        t.diag[i] += up;
        t.diag[i + 1] += down;
        // sqrt(B(w) B(-w)) = (w/2) / sinh(w/2)
        const double half = 0.5 * w;
        t.off[i] = -k * (std::abs(half) < 1e-8 ? 1.0 : half / std::sinh(half));
    }
    return t;
}

struct RawSolve {
    std::vector<double> x;
    double h = 0.0;
    linalg::EigenPairs pairs;
};

RawSolve raw_solve(const SelfAdjointOperator& op, std::size_t n_eigs, std::size_t cells, SLScheme scheme)
{
    RawSolve r;
    r.x = cell_centres(op.interval, cells);
    r.h = op.interval.length() / static_cast<double>(cells);
    const auto t = scheme == SLScheme::fitted_flux ? fitted_flux_matrix(op, r.x, r.h)
                                                   : potential_form_matrix(op, r.x, r.h);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t.diag[i]) || (i + 1 < t.size() && !std::isfinite(t.off[i])))
            throw NumericalError("Sturm-Liouville matrix is not finite at x = " + std::to_string(r.x[i]));
    }
    r.pairs = linalg::lowest_eigenpairs(t, n_eigs);
    for (std::size_t k = 1; k < n_eigs; ++k) {
        if (!(r.pairs.values[k] > r.pairs.values[k - 1])) {
            throw NumericalError("eigenvalues " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                 " not separated: " + std::to_string(r.pairs.values[k - 1]) + ", " +
                                 std::to_string(r.pairs.values[k]) + " on [" + std::to_string(op.interval.lo) +
                                 ", " + std::to_string(op.interval.hi) + "] with " + std::to_string(cells) +
                                 " cells");
        }
    }
    return r;
}

}  // namespace

SpectralDecomposition solve_sturm_liouville(const SelfAdjointOperator& op, std::size_t n_eigs,
                                            const SLOptions& options)
{
    if (n_eigs < 1)
        throw DomainError("n_eigs", "need at least one eigenpair");
    if (!std::isfinite(op.interval.lo) || !std::isfinite(op.interval.hi) || !(op.interval.hi > op.interval.lo))
        throw DomainError("interval", "Sturm-Liouville interval must be finite and non-empty");
    if (options.cells < 8 || n_eigs > options.cells / 2)
        throw DomainError("cells", "grid too coarse for the requested number of eigenpairs");

    const std::size_t cells = options.richardson ? 2 * options.cells : options.cells;
    RawSolve fine = raw_solve(op, n_eigs, cells, options.scheme);

    SpectralDecomposition dec;
    dec.interval = op.interval;
    dec.eigenvalues = fine.pairs.values;
    if (options.richardson) {
        const RawSolve coarse = raw_solve(op, n_eigs, options.cells, options.scheme);
        for (std::size_t k = 0; k < n_eigs; ++k)
            dec.eigenvalues[k] = (4.0 * fine.pairs.values[k] - coarse.pairs.values[k]) / 3.0;
    }

    dec.invariant = invariant_density(op.v, op.p, op.interval, cells).density;
    const GridFunction blank = GridFunction::cells(op.interval, cells);
    const double scale = 1.0 / std::sqrt(fine.h);
    for (std::size_t k = 0; k < n_eigs; ++k) {
        auto& vec = fine.pairs.vectors[k];
        // Sign convention: the first clearly non-zero sample is positive.
        double peak = 0.0;
        for (double g : vec)
            peak = std::max(peak, std::abs(g));
        for (double g : vec) {
            if (std::abs(g) > 1e-3 * peak) {
                if (g < 0.0)
                    for (double& u : vec)
                        u = -u;
                break;
            }
        }
        GridFunction G = blank;
        auto& values = G.segments().front().values;
        for (std::size_t i = 0; i < vec.size(); ++i)
            values[i] = vec[i] * scale;
        dec.eigenfunctions.push_back(std::move(G));
    }
    return dec;
}

int sign_changes(const GridFunction& g, double tol)
{
    double peak = 0.0;
    for (const auto& s : g.segments())
        for (double v : s.values)
            peak = std::max(peak, std::abs(v));
    int changes = 0;
    int last = 0;
    for (const auto& s : g.segments()) {
        for (double v : s.values) {
            if (std::abs(v) <= tol * peak)
                continue;
            const int sgn = v > 0.0 ? 1 : -1;
            if (last != 0 && sgn != last)
                ++changes;
            last = sgn;
        }
    }
    return changes;
}

}  // namespace stochmech
