#include "stochmech/core/hjm.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/finite_diff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stochmech {

double HJMResidual::max_abs(double keep_away_from, std::span<const double> singular) const
{
    double m = 0.0;
    for (const auto& s : residual.segments()) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            bool skip = false;
            for (double xs : singular)
                skip = skip || std::abs(s.x[i] - xs) < keep_away_from;
            if (!skip)
                m = std::max(m, std::abs(s.values[i]));
        }
    }
    return m;
}

double HJMResidual::rms() const
{
    double sum = 0.0, len = 0.0;
    for (const auto& s : residual.segments()) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            sum += s.w[i] * s.values[i] * s.values[i];
            len += s.w[i];
        }
    }
    return len > 0.0 ? std::sqrt(sum / len) : 0.0;
}

HJMResidual hjm_residual(const GridFunction& f, const GridFunction& S_before, const GridFunction& S_now,
                         const GridFunction& S_after, double dt, const GridFunction& V, const PhysicalParams& p)
{
    if (!f.same_grid(S_now) || !f.same_grid(V))
        throw DomainError("grid", "f, S and V must share a grid");
    const GridFunction dSdt = fd::time_derivative(S_before, S_after, dt);
    const GridFunction dSdx = fd::first(S_now);
    const GridFunction R = f.map([](double, double v) { return std::sqrt(std::max(v, 0.0)); });
    const GridFunction R2 = fd::second(R);

    HJMResidual out;
    out.residual = f;
    auto& segs = out.residual.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        auto& s = segs[k];
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double r = R.segment(k).values[i];
            if (!(f.segment(k).values[i] > 0.0)) {
                out.excluded.push_back(s.x[i]);
                s.values[i] = 0.0;
                continue;
            }
            const double sx = dSdx.segment(k).values[i];
            s.values[i] = dSdt.segment(k).values[i] + sx * sx / (2.0 * p.mass) + V.segment(k).values[i] -
                          p.action * p.action / (2.0 * p.mass) * R2.segment(k).values[i] / r;
        }
    }
    return out;
}

}  // namespace stochmech
