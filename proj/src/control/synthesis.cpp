#include "stochmech/control/synthesis.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/finite_diff.hpp"

#include <cmath>

namespace stochmech {

Synthesized synthesize_phase(const GridFunction& f, const GridFunction& W, double theta, const PhysicalParams& p)
{
    if (!f.same_grid(W))
        throw DomainError("W", "density and drift potential must share a grid");
    Synthesized out;
    out.values = f;
    auto& segs = out.values.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        auto& s = segs[k];
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double fi = f.segment(k).values[i];
            if (!(fi > 0.0)) {
                out.excluded.push_back(s.x[i]);
                s.values[i] = 0.0;
                continue;
            }
            s.values[i] = p.mass * W.segment(k).values[i] - 0.5 * p.action * std::log(p.sigma0 * fi) - theta;
        }
    }
    return out;
}

Synthesized synthesize_potential(const EvolutionFrames& fr, const PhysicalParams& p)
{
    if (!(fr.dt > 0.0))
        throw DomainError("dt", "frame spacing must be positive");
    const GridFunction& f = fr.f_now;
    for (const GridFunction* g : {&fr.f_before, &fr.f_after, &fr.W_before, &fr.W_after, &fr.v_now}) {
        if (!f.same_grid(*g))
            throw DomainError("frames", "all frames must share one grid");
    }

    auto log_or_zero = [](double, double v) { return v > 0.0 ? std::log(v) : 0.0; };
    const GridFunction L = f.map(log_or_zero);
    const GridFunction dL = fd::first(L);
    const GridFunction d2L = fd::second(L);
    const GridFunction dLdt = fd::time_derivative(fr.f_before.map(log_or_zero), fr.f_after.map(log_or_zero), fr.dt);
    const GridFunction dWdt = fd::time_derivative(fr.W_before, fr.W_after, fr.dt);

    Synthesized out;
    out.values = f;
    auto& segs = out.values.segments();
    const double hbar = p.action;
    const double m = p.mass;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        auto& s = segs[k];
        const auto positive = [&](std::size_t i) {
            return i < s.size() && f.segment(k).values[i] > 0.0 && fr.f_before.segment(k).values[i] > 0.0 &&
                   fr.f_after.segment(k).values[i] > 0.0;
        };
        for (std::size_t i = 0; i < s.size(); ++i) {
            // The stencil of (ln f)'' reaches one sample to each side.
            const bool ok = positive(i) && (i == 0 || positive(i - 1)) && (i + 1 == s.size() || positive(i + 1));
            if (!ok) {
                out.excluded.push_back(s.x[i]);
                s.values[i] = 0.0;
                continue;
            }
            const double v = fr.v_now.segment(k).values[i];
            s.values[i] = hbar * hbar / (4.0 * m) * d2L.segment(k).values[i] +
                          0.5 * hbar * (dLdt.segment(k).values[i] + v * dL.segment(k).values[i]) -
                          0.5 * m * v * v - m * dWdt.segment(k).values[i] + fr.theta_dot;
        }
    }
    return out;
}

}  // namespace stochmech
