#include "stochmech/control/scenarios.hpp"

#include "stochmech/control/linear_drift.hpp"
#include "stochmech/control/smoothing.hpp"
#include "stochmech/control/synthesis.hpp"
#include "stochmech/core/errors.hpp"
#include "stochmech/oracles/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace stochmech {

ScenarioKind parse_scenario_kind(const std::string& s)
{
    if (s == "ou")
        return ScenarioKind::ou;
    if (s == "n1")
        return ScenarioKind::n1;
    if (s == "decay")
        return ScenarioKind::decay;
    if (s == "packet")
        return ScenarioKind::packet;
    throw DomainError("kind", "unknown scenario '" + s + "' (expected ou, n1, decay or packet)");
}

std::string to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::ou:
        return "ou";
    case ScenarioKind::n1:
        return "n1";
    case ScenarioKind::decay:
        return "decay";
    case ScenarioKind::packet:
        return "packet";
    }
    return "ou";
}

double ControlledEvolution::f(double x, double t) const
{
    return density(params.to_adim_x(x), params.to_adim_t(t)) / params.sigma0;
}

double ControlledEvolution::v(double x, double t) const
{
    return params.sigma0 * params.omega * velocity(params.to_adim_x(x), params.to_adim_t(t));
}

double ControlledEvolution::W(double x, double t) const
{
    return params.sigma0 * params.sigma0 * params.omega *
           drift_potential(params.to_adim_x(x), params.to_adim_t(t));
}

double ControlledEvolution::V(double x, double t) const
{
    return params.energy_unit() * closed_potential(params.to_adim_x(x), params.to_adim_t(t));
}

double ControlledEvolution::gauge(double t) const
{
    return params.action * theta(params.to_adim_t(t));
}

double ControlledEvolution::gauge_rate(double t) const
{
    return params.energy_unit() * theta_rate(params.to_adim_t(t));
}

double ControlledEvolution::S(double x, double t) const
{
    return params.mass * W(x, t) - 0.5 * params.action * std::log(params.sigma0 * f(x, t)) - gauge(t);
}

ControlledEvolution ControlledEvolution::with_gauge_shift(double c) const
{
    ControlledEvolution out = *this;
    const double c_adim = c / params.energy_unit();
    auto th = theta;
    auto rate = theta_rate;
    auto pot = closed_potential;
    out.theta = [th, c_adim](double s) { return th(s) + c_adim * s; };
    out.theta_rate = [rate, c_adim](double s) { return rate(s) + c_adim; };
    out.closed_potential = [pot, c_adim](double xi, double s) { return pot(xi, s) + c_adim; };
    return out;
}

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// ln sinh s for s > 0 without overflow.
double log_sinh(double s)
{
    return s + std::log(-std::expm1(-2.0 * s)) - std::numbers::ln2;
}

ControlledEvolution ou_scenario(double xi0)
{
    ControlledEvolution ev;
    ev.kind = ScenarioKind::ou;
    ev.density = [xi0](double xi, double s) { return ho::ou_kernel(xi, s, xi0); };
    ev.velocity = [](double xi, double) { return -xi; };
    ev.drift_potential = [](double xi, double) { return -0.5 * xi * xi; };
    ev.theta = [](double s) { return 0.5 * log_sinh(s); };
    ev.theta_rate = [](double s) { return 0.5 / std::tanh(s); };
    ev.closed_potential = [xi0](double xi, double s) {
        const double alpha = xi0 * std::exp(-s);
        const double var = -std::expm1(-2.0 * s);
        const double d = xi - alpha;
        return 0.5 * d * d / (var * var) - 0.25 * xi * xi;
    };
    return ev;
}

ControlledEvolution n1_scenario(double xi0)
{
    if (xi0 == 0.0)
        throw DomainError("x0", "the first excited state kernel needs x0 != 0");
    ControlledEvolution ev;
    ev.kind = ScenarioKind::n1;
    ev.half_line = xi0 > 0.0 ? 1 : -1;
    ev.singular = {0.0};
    ev.density = [xi0](double xi, double s) { return ho::n1_kernel(xi, s, xi0); };
    ev.velocity = [](double xi, double) { return 2.0 / xi - xi; };
    ev.drift_potential = [](double xi, double) { return 2.0 * std::log(std::abs(xi)) - 0.5 * xi * xi; };
    ev.theta = [xi0](double s) {
        const double var = -std::expm1(-2.0 * s);
        return std::log(std::expm1(2.0 * s)) + 0.5 * xi0 * xi0 / var - 0.5 * s;
    };
    ev.theta_rate = [xi0](double s) {
        const double var = -std::expm1(-2.0 * s);
        const double alpha = xi0 * std::exp(-s);
        return 0.5 * (4.0 / var - 2.0 * alpha * alpha / (var * var) - 1.0);
    };
    ev.closed_potential = [xi0](double xi, double s) {
        const double var = -std::expm1(-2.0 * s);
        const double alpha = xi0 * std::exp(-s);
        const double y = xi * alpha / var;
        const double y2 = y * y;
        // T = y coth y; 1 - T kept accurate for small y.
        const double one_minus_T = std::abs(y) < 1e-3 ? -y2 / 3.0 + y2 * y2 / 45.0 : 1.0 - y / std::tanh(y);
        const double T = 1.0 - one_minus_T;
        return 0.25 * xi * xi * (2.0 / (var * var) - 1.0) + 1.0 - T / var -
               one_minus_T * one_minus_T / (2.0 * xi * xi);
    };
    return ev;
}

ControlledEvolution decay_scenario()
{
    ControlledEvolution ev;
    ev.kind = ScenarioKind::decay;
    ev.singular = {0.0};
    ev.density = [](double xi, double s) {
        const double b2 = -std::expm1(-2.0 * s);
        const double g2 = std::exp(-2.0 * s);
        return (b2 + g2 * xi * xi) * std::exp(-0.5 * xi * xi) * inv_sqrt_2pi;
    };
    ev.velocity = [](double xi, double) { return -xi; };
    ev.drift_potential = [](double xi, double) { return -0.5 * xi * xi; };
    ev.theta = [](double s) { return 0.5 * s; };
    ev.theta_rate = [](double) { return 0.5; };
    ev.closed_potential = [](double xi, double s) {
        return 0.25 * xi * xi - 2.0 * decay_shape(xi, std::expm1(2.0 * s));
    };
    return ev;
}

// Mean of the packet-transition Gaussian and the integrated gauge, tabulated
// once on a fine grid and interpolated with cubic Hermite pieces.
struct PacketTable {
    double a = 0.0;
    SmoothingFamily F;
    double ds = 1e-3;
    std::vector<double> mu;
    std::vector<double> theta;

    PacketTable(double a_adim, double tau_adim, int N, double s_max) : a(a_adim), F(tau_adim, N)
    {
        const auto n = static_cast<std::size_t>(std::ceil(s_max / ds)) + 1;
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = static_cast<double>(i) * ds;
        const auto moments = linear_drift_moments([this](double t) { return A(t); }, [](double) { return -1.0; },
                                                  a, 1.0, 1.0, s);
        mu = moments.mean;
        theta.assign(n, 0.0);
        using Gauss = boost::math::quadrature::gauss<double, 7>;
        for (std::size_t i = 1; i < n; ++i)
            theta[i] = theta[i - 1] + Gauss::integrate([this](double t) { return theta_rate(t); }, s[i - 1], s[i]);
    }

    double A(double s) const { return a * (std::cos(s) - std::sin(s)) * F.F(s); }
    double dA(double s) const
    {
        return a * (-(std::sin(s) + std::cos(s)) * F.F(s) + (std::cos(s) - std::sin(s)) * F.dF(s));
    }

    double mean(double s) const
    {
        const double pos = s / ds;
        auto i = static_cast<std::size_t>(std::floor(pos));
        if (i + 1 >= mu.size())
            throw DomainError("t", "packet scenario evaluated beyond its tabulated horizon");
        const double u = pos - static_cast<double>(i);
        const double s0 = static_cast<double>(i) * ds;
        const double m0 = mu[i], m1 = mu[i + 1];
        const double d0 = (A(s0) - m0) * ds, d1 = (A(s0 + ds) - m1) * ds;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * m0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * m1 + (u3 - u2) * d1;
    }

    double theta_rate(double s) const
    {
        const double m = mean(s);
        const double amp = A(s);
        return 0.5 + 0.25 * amp * amp - 0.5 * m * m;
    }

    double gauge(double s) const
    {
        const auto i = std::min(static_cast<std::size_t>(std::floor(s / ds)), theta.size() - 2);
        const double s0 = static_cast<double>(i) * ds;
        using Gauss = boost::math::quadrature::gauss<double, 7>;
        return theta[i] + Gauss::integrate([this](double t) { return theta_rate(t); }, s0, s);
    }
};

ControlledEvolution packet_scenario(double a, double tau, int N, double s_max)
{
    auto table = std::make_shared<const PacketTable>(a, tau, N, s_max);
    ControlledEvolution ev;
    ev.kind = ScenarioKind::packet;
    ev.density = [table](double xi, double s) {
        const double d = xi - table->mean(s);
        return std::exp(-0.5 * d * d) * inv_sqrt_2pi;
    };
    ev.velocity = [table](double xi, double s) { return table->A(s) - xi; };
    ev.drift_potential = [table](double xi, double s) { return table->A(s) * xi - 0.5 * xi * xi; };
    ev.theta = [table](double s) { return table->gauge(s); };
    ev.theta_rate = [table](double s) { return table->theta_rate(s); };
    ev.closed_potential = [a, tau, N](double xi, double s) {
        const SmoothingFamily F(tau, N);
        double sum = 0.0;
        for (int k = 1; k <= N; ++k) {
            const double w = F.rate(k);
            sum += F.coefficient(k) *
                   (packet_u_coefficient(w, s) * w * std::exp(-w * s) - (packet_w_coefficient(w) - 2.0) * std::exp(-s));
        }
        return 0.25 * xi * xi - 0.5 * a * xi * sum;
    };
    return ev;
}

}  // namespace

ControlledEvolution make_scenario(ScenarioKind kind, const ScenarioOptions& o, const PhysicalParams& p)
{
    ControlledEvolution ev;
    switch (kind) {
    case ScenarioKind::ou:
        ev = ou_scenario(p.to_adim_x(o.x0));
        break;
    case ScenarioKind::n1:
        ev = n1_scenario(p.to_adim_x(o.x0));
        break;
    case ScenarioKind::decay:
        ev = decay_scenario();
        break;
    case ScenarioKind::packet: {
        const double s_end = std::max({p.to_adim_t(o.t_end), 20.0 * p.to_adim_t(o.tau), 12.0}) + 1.0;
        ev = packet_scenario(p.to_adim_x(o.a), p.to_adim_t(o.tau), o.N, s_end);
        break;
    }
    }
    ev.params = p;
    return ev;
}

GridFunction decay_density(double t, const PhysicalParams& p, double x_max, std::size_t points)
{
    if (!(t >= 0.0))
        throw DomainError("t", "time must be non-negative");
    const auto ev = decay_scenario();
    const Interval iv{-x_max * p.sigma0, x_max * p.sigma0, EndKind::truncated, EndKind::truncated};
    const std::vector<Interval> part{iv};
    const double s = p.to_adim_t(t);
    return GridFunction::sample(part, points,
                                [&](double x) { return ev.density(p.to_adim_x(x), s) / p.sigma0; });
}

double decay_potential(double x, double t, const PhysicalParams& p)
{
    if (!(t >= 0.0))
        throw DomainError("t", "time must be non-negative");
    if (x == 0.0 && t == 0.0)
        throw DomainError("x", "the decay potential is singular at x = 0 for t = 0");
    const double xi = p.to_adim_x(x);
    const double s = p.to_adim_t(t);
    return p.energy_unit() * (0.25 * xi * xi - 2.0 * decay_shape(xi, std::expm1(2.0 * s)));
}

double packet_to_ground_potential(double x, double t, double a, double tau, int N, const PhysicalParams& p)
{
    const SmoothingFamily F(p.to_adim_t(tau), N);
    const double xi = p.to_adim_x(x);
    const double s = p.to_adim_t(t);
    double sum = 0.0;
    for (int k = 1; k <= N; ++k) {
        const double w = F.rate(k);
        sum += F.coefficient(k) *
               (packet_u_coefficient(w, s) * w * std::exp(-w * s) - (packet_w_coefficient(w) - 2.0) * std::exp(-s));
    }
    return p.energy_unit() * (0.25 * xi * xi - 0.5 * p.to_adim_x(a) * xi * sum);
}

GridFunction scenario_grid(const ControlledEvolution& ev, double x_max, double exclusion, std::size_t points)
{
    double lo = ev.half_line > 0 ? 0.0 : -x_max;
    double hi = ev.half_line < 0 ? 0.0 : x_max;
    std::vector<Interval> part;
    std::vector<double> sing = ev.singular;
    std::sort(sing.begin(), sing.end());
    double cur = lo;
    for (double xs : sing) {
        if (xs < lo || xs > hi)
            continue;
        if (xs - exclusion > cur)
            part.push_back({cur, xs - exclusion, EndKind::regular, EndKind::regular});
        cur = xs + exclusion;
    }
    if (hi > cur)
        part.push_back({cur, hi, EndKind::regular, EndKind::regular});
    const PhysicalParams& p = ev.params;
    for (auto& iv : part) {
        iv.lo = p.from_adim_x(iv.lo);
        iv.hi = p.from_adim_x(iv.hi);
    }
    return GridFunction::cells(part, points);
}

FrameCheck certify_frame(const ControlledEvolution& ev, double t, const CertifyOptions& o)
{
    const PhysicalParams& p = ev.params;
    const double dt = p.from_adim_t(o.dt);
    if (!(t - dt > 0.0))
        throw DomainError("t", "certification needs t > dt");
    const GridFunction grid = scenario_grid(ev, o.x_max, o.exclusion, o.points);
    auto at = [&](auto&& fn) { return grid.map([&](double x, double) { return fn(x); }); };

    FrameCheck fc;
    fc.t = t;
    fc.f = at([&](double x) { return ev.f(x, t); });
    fc.v = at([&](double x) { return ev.v(x, t); });

    EvolutionFrames fr;
    fr.dt = dt;
    fr.f_before = at([&](double x) { return ev.f(x, t - dt); });
    fr.f_now = fc.f;
    fr.f_after = at([&](double x) { return ev.f(x, t + dt); });
    fr.W_before = at([&](double x) { return ev.W(x, t - dt); });
    fr.W_after = at([&](double x) { return ev.W(x, t + dt); });
    fr.v_now = fc.v;
    fr.theta_dot = ev.gauge_rate(t);
    auto synth = synthesize_potential(fr, p);
    fc.V_synth = std::move(synth.values);
    fc.excluded = std::move(synth.excluded);
    fc.V_closed = at([&](double x) { return ev.V(x, t); });

    const auto W_now = at([&](double x) { return ev.W(x, t); });
    fc.S = synthesize_phase(fc.f, W_now, ev.gauge(t), p).values;
    const auto S_before = synthesize_phase(fr.f_before, fr.W_before, ev.gauge(t - dt), p).values;
    const auto S_after = synthesize_phase(fr.f_after, fr.W_after, ev.gauge(t + dt), p).values;
    fc.residual = hjm_residual(fc.f, S_before, fc.S, S_after, dt, fc.V_closed, p);

    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < grid.segment_count(); ++k) {
        const auto& a = fc.V_synth.segment(k);
        const auto& b = fc.V_closed.segment(k);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::find(fc.excluded.begin(), fc.excluded.end(), a.x[i]) != fc.excluded.end())
                continue;
            diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
            scale = std::max(scale, std::abs(b.values[i]));
        }
    }
    fc.relative_error = scale > 0.0 ? diff / scale : diff;
    return fc;
}

std::vector<double> control_times(double t_end, double dt0, double growth, double dt_max)
{
    if (!(t_end > 0.0) || !(dt0 > 0.0) || !(growth >= 1.0))
        throw DomainError("time grid", "need t_end > 0, dt0 > 0 and growth >= 1");
    std::vector<double> t;
    double cur = dt0;
    double step = dt0;
    while (cur < t_end) {
        t.push_back(cur);
        step = std::min(step * growth, dt_max);
        cur += step;
    }
    t.push_back(t_end);
    return t;
}

void write_control_csv(std::ostream& out, const std::vector<FrameCheck>& frames)
{
    const auto old = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "t,x,f,v,S,V\n";
    for (const auto& fc : frames) {
        for (std::size_t k = 0; k < fc.f.segment_count(); ++k) {
            const auto& fs = fc.f.segment(k);
            for (std::size_t i = 0; i < fs.size(); ++i) {
                out << fc.t << ',' << fs.x[i] << ',' << fs.values[i] << ',' << fc.v.segment(k).values[i] << ','
                    << fc.S.segment(k).values[i] << ',' << fc.V_synth.segment(k).values[i] << '\n';
            }
        }
    }
    out.precision(old);
}

std::vector<ControlRow> read_control_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,f,v,S,V", 0) != 0)
        throw DomainError("csv", "expected header 't,x,f,v,S,V'");
    std::vector<ControlRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        ControlRow r{};
        if (!(ss >> r.t >> r.x >> r.f >> r.v >> r.S >> r.V))
            throw DomainError("csv", "malformed control row at line " + std::to_string(line_no));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace stochmech
