#include "stochmech/core/finite_diff.hpp"

#include "stochmech/core/errors.hpp"

namespace stochmech::fd {

std::vector<double> first(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 3)
        throw DomainError("samples", "first derivative needs at least three samples");
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> second(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 3)
        throw DomainError("samples", "second derivative needs at least three samples");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    if (n == 3) {
        d[0] = d[2] = d[1];
        return d;
    }
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return d;
}

namespace {

template <class Op>
GridFunction apply(const GridFunction& g, Op op)
{
    GridFunction out = g;
    for (auto& s : out.segments()) {
        if (s.size() < 3)
            throw DomainError("samples", "segment too short for finite differences");
        s.values = op(std::span<const double>(s.values), s.x[1] - s.x[0]);
    }
    return out;
}

}  // namespace

GridFunction first(const GridFunction& g)
{
    return apply(g, [](std::span<const double> f, double h) { return first(f, h); });
}

GridFunction second(const GridFunction& g)
{
    return apply(g, [](std::span<const double> f, double h) { return second(f, h); });
}

GridFunction time_derivative(const GridFunction& before, const GridFunction& after, double dt)
{
    if (!before.same_grid(after))
        throw DomainError("frames", "time frames live on different grids");
    if (!(dt > 0.0))
        throw DomainError("dt", "must be positive");
    GridFunction out = after;
    auto& segs = out.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& b = before.segment(k).values;
        for (std::size_t i = 0; i < b.size(); ++i)
            segs[k].values[i] = (segs[k].values[i] - b[i]) / (2.0 * dt);
    }
    return out;
}

}  // namespace stochmech::fd
