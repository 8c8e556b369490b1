#include "stochmech/core/velocity.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/finite_diff.hpp"
#include "stochmech/core/hermite.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace stochmech {

double VelocityField::slope(double x, double t) const
{
    if (derivative)
        return derivative(x, t);
    const double h = 1e-5 * (1.0 + std::abs(x));
    return (value(x + h, t) - value(x - h, t)) / (2.0 * h);
}

VelocityField ho_velocity_field(int n)
{
    VelocityField v;
    v.value = [n](double x, double) { return ho::velocity(n, x); };
    v.potential = [n](double x, double) { return ho::drift_potential(n, x); };
    v.derivative = [n](double x, double) { return ho::velocity_derivative(n, x); };
    v.nodes = ho::nodes(n);
    v.stationary = true;
    return v;
}

VelocityField linear_velocity_field(std::function<double(double)> A, double B, bool stationary)
{
    VelocityField v;
    v.value = [A, B](double x, double t) { return A(t) + B * x; };
    v.potential = [A, B](double x, double t) { return A(t) * x + 0.5 * B * x * x; };
    v.derivative = [B](double, double) { return B; };
    v.stationary = stationary;
    return v;
}

VelocityField zero_velocity_field()
{
    return linear_velocity_field([](double) { return 0.0; }, 0.0, true);
}

double drift_integral(const VelocityField& v, double a, double b, double t)
{
    if (a == b)
        return 0.0;
    if (v.has_potential())
        return v.potential(b, t) - v.potential(a, t);

    using Gauss = boost::math::quadrature::gauss<double, 15>;
    const double width = std::abs(b - a);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double pole = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    for (double xk : v.nodes) {
        const double d = xk <= lo ? lo - xk : (xk >= hi ? xk - hi : 0.0);
        if (d < best) {
            best = d;
            pole = xk;
        }
    }
    if (!(best < 4.0 * width))
        return Gauss::integrate([&](double x) { return v.value(x, t); }, a, b);
    if (best == 0.0)
        throw DomainError("interval", "drift integral across the node at " + std::to_string(pole));
    const double s = v.node_strength;
    const double smooth = Gauss::integrate([&](double x) { return v.value(x, t) - s / (x - pole); }, a, b);
    return smooth + s * std::log(std::abs((b - pole) / (a - pole)));
}

namespace {

void split_at_zeros(const Segment& s, std::vector<Segment>& out, std::vector<double>& zeros)
{
    Segment cur;
    cur.interval = s.interval;
    auto flush = [&](double hi, EndKind hi_kind) {
        if (cur.x.empty())
            return;
        cur.interval.hi = hi;
        cur.interval.hi_kind = hi_kind;
        out.push_back(cur);
        cur = Segment{};
    };
    double peak = 0.0;
    for (double r : s.values)
        peak = std::max(peak, r);
    // A node sample: zero, or a round-off sized local minimum.
    auto at_node = [&](std::size_t i) {
        const double r = s.values[i];
        if (r == 0.0)
            return true;
        return i > 0 && i + 1 < s.size() && r <= 1e-10 * peak && r <= s.values[i - 1] && r <= s.values[i + 1];
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.values[i] < 0.0)
            throw DomainError("R", "amplitude is negative at x = " + std::to_string(s.x[i]));
        if (at_node(i)) {
            if (i == 0 || i + 1 == s.size())
                continue;  // endpoint samples: the node is the interval end itself
            zeros.push_back(s.x[i]);
            flush(s.x[i], EndKind::node);
            cur.interval.lo = s.x[i];
            cur.interval.lo_kind = EndKind::node;
            continue;
        }
        cur.x.push_back(s.x[i]);
        cur.w.push_back(s.w[i]);
        cur.values.push_back(s.values[i]);
    }
    flush(s.interval.hi, s.interval.hi_kind);
}

}  // namespace

GridFunction sampled_velocity(const GridFunction& R, const GridFunction& S, const PhysicalParams& p)
{
    if (!R.same_grid(S))
        throw DomainError("S", "R and S must share a grid");
    std::vector<Segment> pieces;
    std::vector<double> zeros;
    std::vector<Segment> phase_pieces;
    for (std::size_t k = 0; k < R.segment_count(); ++k) {
        const std::size_t first = pieces.size();
        split_at_zeros(R.segment(k), pieces, zeros);
        // Matching phase samples, by abscissa.
        const auto& sk = S.segment(k);
        for (std::size_t j = first; j < pieces.size(); ++j) {
            Segment ph = pieces[j];
            for (std::size_t i = 0; i < ph.size(); ++i) {
                const auto it = std::lower_bound(sk.x.begin(), sk.x.end(), ph.x[i]);
                ph.values[i] = sk.values[static_cast<std::size_t>(it - sk.x.begin())];
            }
            phase_pieces.push_back(std::move(ph));
        }
    }

    for (std::size_t j = 0; j < pieces.size(); ++j) {
        auto& seg = pieces[j];
        if (seg.size() < 3)
            throw DomainError("R", "fewer than three positive samples between nodes near x = " +
                                       std::to_string(seg.x.front()));
        const double h = seg.x[1] - seg.x[0];
        std::vector<double> log_r(seg.size());
        for (std::size_t i = 0; i < seg.size(); ++i)
            log_r[i] = std::log(seg.values[i]);
        const auto dlog = fd::first(log_r, h);
        const auto ds = fd::first(phase_pieces[j].values, h);
        for (std::size_t i = 0; i < seg.size(); ++i)
            seg.values[i] = ds[i] / p.mass + (p.action / p.mass) * dlog[i];
    }
    return GridFunction(std::move(pieces));
}

VelocityField velocity_from_state(const GridFunction& R, const GridFunction& S, const PhysicalParams& p)
{
    auto g = std::make_shared<const GridFunction>(sampled_velocity(R, S, p));
    VelocityField v;
    v.value = [g](double x, double) { return g->interpolate(x); };
    v.stationary = true;
    v.node_strength = p.action / p.mass;
    const auto& segs = g->segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (k == 0 && segs[k].interval.lo_kind == EndKind::node)
            v.nodes.push_back(segs[k].interval.lo);
        if (k + 1 < segs.size()) {
            v.nodes.push_back(0.5 * (segs[k].interval.hi + segs[k + 1].interval.lo));
        } else if (segs[k].interval.hi_kind == EndKind::node) {
            v.nodes.push_back(segs[k].interval.hi);
        }
    }
    return v;
}

}  // namespace stochmech
