#include "stochmech/spectral/spectral.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stochmech {

InvariantDensity invariant_density(const VelocityField& v, double D, const Interval& interval, std::size_t cells)
{
    if (!(D > 0.0))
        throw DomainError("D", "diffusion coefficient must be positive");
    InvariantDensity out;
    out.density = GridFunction::cells(interval, cells);
    auto& s = out.density.segments().front();

    std::vector<double> log_h(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i)
        log_h[i] = log_h[i - 1] + drift_integral(v, s.x[i - 1], s.x[i], 0.0) / D;
    const double top = *std::max_element(log_h.begin(), log_h.end());
    double mass = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s.values[i] = std::exp(log_h[i] - top);
        mass += s.w[i] * s.values[i];
    }
    for (double& x : s.values)
        x /= mass;

    // h ~ |x - x_k|^{c/D} next to a pole of residue c; c/D <= -1 is not integrable.
    auto check = [&](double end, EndKind kind, double x_in) {
        if (kind != EndKind::node)
            return;
        const double residue = v(x_in) * (x_in - end);
        if (residue / D <= -1.0)
            out.singular_ends.push_back(end);
    };
    check(interval.lo, interval.lo_kind, s.x.front());
    check(interval.hi, interval.hi_kind, s.x.back());
    return out;
}

namespace {

const Segment* matching_segment(const GridFunction& f, const Segment& target)
{
    for (const auto& s : f.segments()) {
        if (s.size() != target.size())
            continue;
        bool same = true;
        for (std::size_t i = 0; i < s.size() && same; ++i)
            same = std::abs(s.x[i] - target.x[i]) <= 1e-12 * (1.0 + std::abs(s.x[i]));
        if (same)
            return &s;
    }
    return nullptr;
}

}  // namespace

std::vector<double> expand_initial(const GridFunction& f0, const SpectralDecomposition& dec)
{
    const Segment& hs = dec.invariant.segment(0);
    std::vector<double> f(hs.size());
    if (const Segment* m = matching_segment(f0, hs)) {
        f = m->values;
    } else {
        for (std::size_t i = 0; i < hs.size(); ++i)
            f[i] = f0.interpolate(hs.x[i]);
    }

    std::vector<double> c(dec.count(), 0.0);
    for (std::size_t n = 0; n < dec.count(); ++n) {
        const auto& g = dec.eigenfunctions[n].segment(0).values;
        double sum = 0.0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (hs.values[i] > 0.0)
                sum += f[i] * g[i] / std::sqrt(hs.values[i]) * hs.w[i];
        }
        c[n] = sum;
    }
    return c;
}

SpectralEvolution evolve_spectral(const SpectralDecomposition& dec, const std::vector<double>& c, double t)
{
    if (!(t >= 0.0))
        throw DomainError("t", "time must be non-negative");
    if (c.size() > dec.count())
        throw DomainError("c", "more coefficients than eigenpairs");
    SpectralEvolution out;
    out.density = dec.invariant;
    auto& s = out.density.segments().front();
    const auto& h = dec.invariant.segment(0).values;
    std::fill(s.values.begin(), s.values.end(), 0.0);
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double amp = c[n] * std::exp(-dec.eigenvalues[n] * t);
        const auto& g = dec.eigenfunctions[n].segment(0).values;
        for (std::size_t i = 0; i < s.size(); ++i)
            s.values[i] += amp * std::sqrt(h[i]) * g[i];
    }
    for (double v : s.values)
        out.max_negative = std::max(out.max_negative, -v);
    if (!c.empty()) {
        const std::size_t last = c.size() - 1;
        double peak = 0.0;
        const auto& g = dec.eigenfunctions[last].segment(0).values;
        for (std::size_t i = 0; i < s.size(); ++i)
            peak = std::max(peak, std::abs(std::sqrt(h[i]) * g[i]));
        out.tail_bound = std::abs(c[last]) * std::exp(-dec.eigenvalues[last] * t) * peak;
    }
    return out;
}

std::vector<SpectralDecomposition> decompose(const VelocityField& v, double D, double x_max, std::size_t n_eigs,
                                             const SLOptions& options)
{
    std::vector<SpectralDecomposition> out;
    for (const auto& iv : v.partition(x_max))
        out.push_back(solve_sturm_liouville(self_adjoint_coeffs(v, D, iv), n_eigs, options));
    return out;
}

SpectralEvolution evolve_spectral(const std::vector<SpectralDecomposition>& decs, const GridFunction& f0, double t)
{
    std::vector<Segment> segs;
    SpectralEvolution out;
    for (const auto& dec : decs) {
        const auto c = expand_initial(f0, dec);
        auto part = evolve_spectral(dec, c, t);
        out.max_negative = std::max(out.max_negative, part.max_negative);
        out.tail_bound = std::max(out.tail_bound, part.tail_bound);
        segs.push_back(part.density.segment(0));
    }
    out.density = GridFunction(std::move(segs));
    return out;
}

namespace {

std::string kind_name(EndKind k)
{
    switch (k) {
    case EndKind::node:
        return "node";
    case EndKind::truncated:
        return "truncated";
    case EndKind::regular:
        return "regular";
    }
    return "regular";
}

}  // namespace

nlohmann::json to_json(const SpectralDecomposition& dec)
{
    nlohmann::json j;
    j["interval"] = {{"lo", dec.interval.lo},
                     {"hi", dec.interval.hi},
                     {"lo_kind", kind_name(dec.interval.lo_kind)},
                     {"hi_kind", kind_name(dec.interval.hi_kind)}};
    j["eigenvalues"] = dec.eigenvalues;
    j["mass"] = dec.mass;
    j["grid"] = dec.invariant.segment(0).x;
    auto fns = nlohmann::json::array();
    for (const auto& g : dec.eigenfunctions)
        fns.push_back(g.segment(0).values);
    j["eigenfunctions"] = fns;
    return j;
}

}  // namespace stochmech
