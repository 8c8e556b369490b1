#include "oracles.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/hermite.hpp"
#include "stochmech/sde/ensemble.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace stochmech;
using doctest::Approx;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    for (double x : xs)
        m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    for (double x : xs)
        m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(xs.size() - 1);
    return m;
}

SDEOptions options(std::size_t n, double dt, double t_end, std::uint64_t seed = 7)
{
    SDEOptions o;
    o.n_particles = n;
    o.dt = dt;
    o.t_end = t_end;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("counter RNG")
{
    CounterRng a(3, 11, 5), b(3, 11, 5), c(3, 12, 5);
    std::vector<std::uint64_t> ra, rb, rc;
    for (int i = 0; i < 16; ++i) {
        ra.push_back(a.next_u64());
        rb.push_back(b.next_u64());
        rc.push_back(c.next_u64());
    }
    CHECK(ra == rb);
    CHECK(ra != rc);

    CounterRng d(3, 11, 0);
    d.set_step(5);
    CHECK(d.next_u64() == ra[0]);

    const int n = 200000;
    CounterRng g(1, 0, 0);
    double s = 0, s2 = 0, u_min = 1, u_max = 0;
    for (int i = 0; i < n; ++i) {
        const double z = g.normal();
        s += z;
        s2 += z * z;
        const double u = g.uniform();
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
    }
    CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(u_min > 0.0);
    CHECK(u_max < 1.0);
}

TEST_CASE("Brownian increments have variance 2 D t")
{
    const auto o = options(4000, 0.01, 0.5);
    const auto res = simulate(zero_velocity_field(), point_sampler(0.0), o);
    const auto m = moments(res.snapshots.back());
    const double expected = 2.0 * o.D * o.t_end;
    CHECK(std::abs(m.mean) < 4.0 * std::sqrt(expected / 4000));
    CHECK(std::abs(m.var - expected) < 4.0 * expected * std::sqrt(2.0 / 4000));
    CHECK(res.steps == 50);
}

TEST_CASE("OU ensemble")
{
    const auto v = ho_velocity_field(0);

    // The invariant Gaussian stays put.
    const std::size_t n = 20000;
    auto o = options(n, 1e-3, 1.0);
    o.snapshot_times = {0.0, 0.5};
    const auto still = simulate(v, gaussian_sampler(0.0, 1.0), o);
    REQUIRE(still.times.size() == 3);
    for (const auto& snap : still.snapshots) {
        const auto m = moments(snap);
        CHECK(std::abs(m.mean) < 3.0 / std::sqrt(n));
        CHECK(std::abs(m.var - 1.0) < 3.0 * std::sqrt(2.0 / n));
    }

    // A point source follows alpha(t) and sigma^2(t), and its histogram the kernel.
    const double x0 = 1.5;
    auto po = options(n, 1e-3, 1.0, 11);
    po.snapshot_times = {0.3};
    const auto moved = simulate(v, point_sampler(x0), po);
    for (std::size_t i = 0; i < moved.times.size(); ++i) {
        const double t = moved.times[i];
        const double var = 1.0 - std::exp(-2.0 * t);
        const auto m = moments(moved.snapshots[i]);
        CHECK(std::abs(m.mean - x0 * std::exp(-t)) < 4.0 * std::sqrt(var / n));
        CHECK(std::abs(m.var - var) < 4.0 * var * std::sqrt(2.0 / n));
    }
    HistogramOptions h;
    h.bins = 50;
    const double l1 = histogram_l1(moved.snapshots.back(), [&](double x) { return oracle::ou(x, 1.0, x0); }, h);
    CHECK(l1 < 0.05);
    CHECK(moved.label_violations == 0);
}

TEST_CASE("histogram distance shrinks with the sample size")
{
    auto sample = [](std::size_t n) {
        std::vector<double> xs;
        const auto draw = gaussian_sampler(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            CounterRng rng(5, i);
            xs.push_back(draw(rng));
        }
        return xs;
    };
    auto ref = [](double x) { return oracle::phi(0, x) * oracle::phi(0, x); };
    const double small = histogram_l1(sample(1000), ref);
    const double large = histogram_l1(sample(100000), ref);
    CHECK(large < small / 4);
    CHECK(large < 0.05);
    CHECK_THROWS_AS(histogram_l1({}, ref), DomainError);
    CHECK_THROWS_AS(histogram_l1({0.0}, ref, {0, -1, 1}), DomainError);
}

TEST_CASE("grid sampler draws from the cell density")
{
    const std::vector<Interval> part{{-2, 2, EndKind::regular, EndKind::regular}};
    const auto f = GridFunction::sample(part, 40, [](double x) { return x > 1.0 ? 1.0 : 0.0; });
    const auto draw = grid_sampler(f);
    double lo = 10, hi = -10;
    for (std::size_t i = 0; i < 2000; ++i) {
        CounterRng rng(2, i);
        const double x = draw(rng);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(lo >= 1.0);
    CHECK(hi <= 2.0);
    CHECK(hi - lo > 0.9);
    CHECK_THROWS_AS(grid_sampler(f.map([](double, double) { return 0.0; })), DomainError);
}

TEST_CASE("nodes are impenetrable")
{
    // n = 1: particles released on the right stay there and relax to 2 phi_1^2.
    const auto v1 = ho_velocity_field(1);
    const std::size_t n = 20000;
    auto o = options(n, 5e-3, 4.0);
    o.snapshot_times = {0.5};
    const auto res = simulate(v1, gaussian_sampler(1.2, 0.2), o);
    bool all_right = true;
    for (const auto& snap : res.snapshots)
        for (double x : snap)
            all_right = all_right && x > 0.0;
    CHECK(all_right);
    CHECK(res.label_violations == 0);
    HistogramOptions h;
    h.lo = 0.0;
    h.hi = 5.0;
    h.bins = 25;
    const double l1 = histogram_l1(res.snapshots.back(), [](double x) { return 2 * std::pow(oracle::phi(1, x), 2); }, h);
    CHECK(l1 < 0.05);

    // n = 2: the labels of the three intervals are kept.
    const auto v2 = ho_velocity_field(2);
    const auto res2 = simulate(v2, gaussian_sampler(0.0, 0.3), options(1000, 1e-3, 1.0));
    CHECK(res2.label_violations == 0);
    for (std::size_t i = 0; i < res2.labels.size(); ++i) {
        const double x = res2.snapshots.back()[i];
        const int side = x < -1.0 ? 0 : (x < 1.0 ? 1 : 2);
        CHECK(side == res2.labels[i]);
    }

    // Starting on a node is refused.
    CHECK_THROWS_AS(simulate(v1, point_sampler(0.0), options(10, 1e-3, 0.1)), DomainError);
    CHECK_THROWS_AS(simulate(v2, point_sampler(ho::nodes(2).back()), options(10, 1e-3, 0.1)), DomainError);
}

TEST_CASE("seed determinism")
{
    const auto v = ho_velocity_field(1);
    const auto a = simulate(v, gaussian_sampler(0.5, 1.0), options(200, 1e-3, 0.3, 42));
    const auto b = simulate(v, gaussian_sampler(0.5, 1.0), options(200, 1e-3, 0.3, 42));
    const auto c = simulate(v, gaussian_sampler(0.5, 1.0), options(200, 1e-3, 0.3, 43));
    CHECK(a.snapshots == b.snapshots);
    CHECK(a.rejected_crossings == b.rejected_crossings);
    CHECK(a.snapshots != c.snapshots);
}

TEST_CASE("snapshot CSV round trip and invalid runs")
{
    auto o = options(5, 0.01, 0.1);
    o.snapshot_times = {0.05};
    const auto res = simulate(ho_velocity_field(0), gaussian_sampler(0.0, 1.0), o);
    std::stringstream io;
    write_snapshot_csv(io, res);
    const auto rows = read_snapshot_csv(io);
    REQUIRE(rows.size() == 10);
    CHECK(rows[7].t == res.times[1]);
    CHECK(rows[7].particle == 2);
    CHECK(rows[7].x == res.snapshots[1][2]);

    std::stringstream bad("t,particle_id,x\n0.1,zero,1\n");
    CHECK_THROWS_AS(read_snapshot_csv(bad), DomainError);

    const auto v = ho_velocity_field(0);
    CHECK_THROWS_AS(simulate(v, point_sampler(0), options(10, 0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(simulate(v, point_sampler(0), options(0, 0.01, 1.0)), DomainError);
    auto late = options(10, 0.01, 1.0);
    late.snapshot_times = {2.0};
    CHECK_THROWS_AS(simulate(v, point_sampler(0), late), DomainError);
}
