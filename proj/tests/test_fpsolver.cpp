#include "oracles.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/hermite.hpp"
#include "stochmech/fpsolver/fp.hpp"
#include "stochmech/oracles/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace stochmech;
using doctest::Approx;

namespace {

FPTrajectory run(const VelocityField& v, const GridFunction& f0, std::vector<double> times, double dt = 1e-2)
{
    FPProblem prob;
    prob.v = v;
    prob.f0 = f0;
    prob.output_times = std::move(times);
    prob.dt = dt;
    return evolve_fp(prob);
}

}  // namespace

TEST_CASE("the Gaussian is stationary under the oscillator drift")
{
    const auto v = ho_velocity_field(0);
    const auto grid = fp_grid(v, 10.0, 2000);
    const auto f0 = grid.map([](double x, double) { return oracle::phi(0, x) * oracle::phi(0, x); });
    const auto traj = run(v, f0, {0.5, 5.0});
    for (const auto& f : traj.frames)
        CHECK(l1_distance(f, f0) < 1e-5);
    CHECK(traj.max_mass_drift < 1e-12);
}

TEST_CASE("point source relaxes along the OU kernel")
{
    const auto v = ho_velocity_field(0);
    const auto grid = fp_grid(v, 12.0, 2000);
    const auto traj = run(v, hat_delta(grid, 1.0), {0.1, 0.5, 1.0, 5.0});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto exact = grid.map([&](double x, double) { return oracle::ou(x, traj.times[i], 1.0); });
        CHECK(l1_distance(traj.frames[i], exact) < 1e-3);
        CHECK(traj.frames[i].min_value() >= 0.0);
    }
    CHECK(traj.frames.back().integral() == Approx(1.0).epsilon(1e-12));

    // Distance to the invariant density falls monotonically.
    const auto h = grid.map([](double x, double) { return oracle::phi(0, x) * oracle::phi(0, x); });
    for (std::size_t i = 1; i < traj.frames.size(); ++i)
        CHECK(l1_distance(traj.frames[i], h) < l1_distance(traj.frames[i - 1], h));
}

TEST_CASE("n = 1 drift keeps the half-line masses and relaxes")
{
    const auto v = ho_velocity_field(1);
    const auto grid = fp_grid(v, 8.0, 800);
    REQUIRE(grid.segment_count() == 2);
    const auto f0 = grid.map([](double x, double) { return x > 0 ? oracle::ou(x, 0.3, 1.2) : oracle::ou(x, 0.3, -0.4); });
    const double norm = f0.integral();
    const auto start = f0.map([&](double, double v) { return v / norm; });
    const auto traj = run(v, start, {1.0, 8.0});
    const auto m0 = start.segment_masses();
    CHECK(traj.max_mass_drift < 1e-10);
    for (const auto& f : traj.frames) {
        const auto m = f.segment_masses();
        CHECK(m[0] == Approx(m0[0]).epsilon(1e-10));
        CHECK(m[1] == Approx(m0[1]).epsilon(1e-10));
    }
    const auto limit = grid.map([&](double x, double) {
        const double q = 2.0 * m0[1];
        return gamma_factor(q, x) * oracle::phi(1, x) * oracle::phi(1, x);
    });
    CHECK(l1_distance(traj.frames.back(), limit) < 1e-4);

    // Equal shares relax to phi_1^2 itself.
    const auto sym = grid.map([](double x, double) { return oracle::ou(std::abs(x), 0.3, 1.0) / 2; });
    const auto sym_traj = run(v, sym.map([&](double, double y) { return y / sym.integral(); }), {8.0});
    const auto phi2 = grid.map([](double x, double) { return oracle::phi(1, x) * oracle::phi(1, x); });
    CHECK(l1_distance(sym_traj.frames[0], phi2) < 1e-4);
}

TEST_CASE("hat impulse")
{
    const auto grid = fp_grid(ho_velocity_field(0), 4.0, 400);
    const auto& s = grid.segment(0);
    const auto on_centre = hat_delta(grid, s.x[100]);
    CHECK(on_centre.integral() == Approx(1.0));
    CHECK(on_centre.segment(0).values[100] * s.w[100] == Approx(1.0));

    const double mid = 0.5 * (s.x[100] + s.x[101]);
    const auto between = hat_delta(grid, mid);
    CHECK(between.segment(0).values[100] == Approx(between.segment(0).values[101]));

    // On a node, the impulse is split evenly between the two sides.
    const auto g1 = fp_grid(ho_velocity_field(1), 4.0, 400);
    const auto split = hat_delta(g1, 0.0);
    CHECK(split.segment_masses()[0] == Approx(0.5));
    CHECK(split.segment_masses()[1] == Approx(0.5));

    CHECK_THROWS_AS(hat_delta(grid, 10.0), DomainError);
}

TEST_CASE("L1 distance")
{
    const auto grid = fp_grid(ho_velocity_field(0), 4.0, 400);
    const auto a = hat_delta(grid, -2.0);
    const auto b = hat_delta(grid, 2.0);
    CHECK(l1_distance(a, a) == 0.0);
    CHECK(l1_distance(a, b) == Approx(2.0));
    CHECK_THROWS_AS(l1_distance(a, fp_grid(ho_velocity_field(0), 4.0, 300)), DomainError);
}

TEST_CASE("zero flux through nodes and truncation ends")
{
    const auto v = ho_velocity_field(2);
    const auto grid = fp_grid(v, 8.0, 3000);
    const auto f = grid.map([](double x, double) { return oracle::ou(x, 0.5, 0.3); });
    for (double flux : boundary_fluxes(v, 1.0, f, 0.0))
        CHECK(std::abs(flux) < 1e-13);
}

TEST_CASE("Chapman-Kolmogorov composition")
{
    const auto v = ho_velocity_field(0);
    const auto grid = fp_grid(v, 10.0, 1500);

    const double x0 = grid.segment(0).x[900];
    const auto slice = chapman_kolmogorov([](double x, double y) { return oracle::ou(x, 0.4, y); }, hat_delta(grid, x0));
    const auto direct = grid.map([&](double x, double) { return oracle::ou(x, 0.4, x0); });
    CHECK(l1_distance(slice, direct) < 1e-10);

    // Two half steps make one full step.
    const auto half = chapman_kolmogorov([](double x, double y) { return oracle::ou(x, 0.25, y); }, direct);
    const auto full = grid.map([&](double x, double) { return oracle::ou(x, 0.65, x0); });
    CHECK(l1_distance(half, full) < 1e-5);

    // phi_1^2 is invariant under the n = 1 kernel.
    const auto g1 = fp_grid(ho_velocity_field(1), 10.0, 2000);
    const auto phi2 = g1.map([](double x, double) { return oracle::phi(1, x) * oracle::phi(1, x); });
    const auto moved = chapman_kolmogorov([](double x, double y) { return ho::n1_kernel(x, 0.7, y); }, phi2);
    CHECK(l1_distance(moved, phi2) < 1e-4);

    // A kernel that loses mass is reported.
    CHECK_THROWS_AS(chapman_kolmogorov([](double x, double y) { return 0.5 * oracle::ou(x, 0.4, y); }, direct),
                    NumericalError);
}

TEST_CASE("tabulated kernels against the closed forms")
{
    const auto v = ho_velocity_field(1);
    const auto grid = fp_grid(v, 12.0, 2000);
    const auto table = tabulate_kernel(v, 1.0, grid, {0.7, -1.5}, 0.5);
    REQUIRE(table.slices.size() == 2);
    const auto exact = grid.map([](double x, double) { return oracle::n1(x, 0.5, 0.7); });
    CHECK(l1_distance(table.slices[0], exact) < 3e-3);
    CHECK(table(1.0, 0.7) == Approx(oracle::n1(1.0, 0.5, 0.7)).epsilon(1e-2));
    CHECK(table.slices[1].segment_masses()[1] == 0.0);
}

TEST_CASE("trajectory CSV round trip")
{
    const auto v = ho_velocity_field(0);
    const auto grid = fp_grid(v, 6.0, 200);
    const auto traj = run(v, hat_delta(grid, 0.5), {0.2, 0.4});
    std::stringstream io;
    write_trajectory_csv(io, traj);
    const auto back = read_trajectory_csv(io);
    REQUIRE(back.size() == 2);
    CHECK(back[1].t == traj.times[1]);
    CHECK(back[1].x == traj.frames[1].all_x());
    CHECK(back[1].f == traj.frames[1].all_values());
}

TEST_CASE("invalid problems")
{
    const auto v = ho_velocity_field(0);
    const auto grid = fp_grid(v, 6.0, 200);
    FPProblem prob;
    prob.v = v;
    prob.f0 = hat_delta(grid, 0.5);
    prob.output_times = {-1.0};
    CHECK_THROWS_AS(evolve_fp(prob), DomainError);
    prob.output_times = {1.0};
    prob.D = 0.0;
    CHECK_THROWS_AS(evolve_fp(prob), DomainError);
    CHECK_THROWS_AS(fp_grid(ho_velocity_field(3), 1.0, 200), DomainError);
}
