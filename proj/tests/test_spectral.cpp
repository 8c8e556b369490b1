#include "oracles.hpp"

#include "stochmech/core/errors.hpp"
#include "stochmech/core/hermite.hpp"
#include "stochmech/fpsolver/fp.hpp"
#include "stochmech/spectral/confluent.hpp"
#include "stochmech/spectral/ho_interval.hpp"
#include "stochmech/spectral/spectral.hpp"
#include "stochmech/spectral/sturm_liouville.hpp"

#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <doctest.h>

#include <cmath>

using namespace stochmech;
using doctest::Approx;

namespace {

const Interval middle{-1.0, 1.0, EndKind::node, EndKind::node};

SpectralDecomposition solve(int n, const Interval& iv, std::size_t count, bool richardson = false,
                            std::size_t cells = 2000, SLScheme scheme = SLScheme::fitted_flux)
{
    SLOptions o;
    o.cells = cells;
    o.richardson = richardson;
    o.scheme = scheme;
    return solve_sturm_liouville(self_adjoint_coeffs(ho_velocity_field(n), 1.0, iv), count, o);
}

bool is_odd(const GridFunction& g)
{
    const auto& v = g.segment(0).values;
    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += std::abs(v[i] + v[v.size() - 1 - i]);
        d += std::abs(v[i]);
    }
    return s < 1e-6 * d;
}

}  // namespace

TEST_CASE("confluent M: identities")
{
    for (double a : {-3.3, 0.5, 2.0})
        CHECK(confluent_M(a, 1.5, 0.0) == 1.0);
    for (double z : {0.5, 3.0, 17.0, 60.0, 150.0})
        CHECK(confluent_M(1.7, 1.7, z) == Approx(std::exp(z)).epsilon(1e-12));
    // a = -3: a Laguerre polynomial, M(-3, b; z) = 1 - 3z/b + 3z^2/(b(b+1)) - z^3/(b(b+1)(b+2)).
    const double b = 1.5;
    for (double z : {0.2, 4.0, 40.0}) {
        const double expect = 1 - 3 * z / b + 3 * z * z / (b * (b + 1)) - z * z * z / (b * (b + 1) * (b + 2));
        CHECK(confluent_M(-3.0, b, z) == Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS_AS(confluent_M(0.5, 1.5, -1.0), DomainError);
}

TEST_CASE("confluent M: quad-precision series")
{
    for (double a : {-12.7, -4.25, -0.5, 0.3, 3.5})
        for (double b : {0.5, 1.5, 2.5})
            for (double z : {0.5, 2.0, 9.0, 25.0}) {
                const double ref = oracle::kummer_series(a, b, z);
                CHECK(std::abs(confluent_M(a, b, z) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
            }
}

TEST_CASE("confluent M: large argument against Boost")
{
    for (double a : {-3.3, -0.5, 2.5})
        for (double z : {50.0, 100.0, 180.0}) {
            const double ref = boost::math::hypergeometric_1F1(a, 1.5, z);
            CHECK(confluent_M(a, 1.5, z) == Approx(ref).epsilon(1e-9));
        }
}

TEST_CASE("confluent M vanishes at the first odd eigenvalue")
{
    const double mu = oracle::n2_odd_mu[0];
    CHECK(std::abs(confluent_M(-(mu + 1) / 2, 1.5, 0.5)) < 1e-12);
    CHECK(confluent_M(-(7.40 + 1) / 2, 1.5, 0.5) * confluent_M(-(7.48 + 1) / 2, 1.5, 0.5) < 0.0);
}

TEST_CASE("invariant densities")
{
    SUBCASE("oscillator drift: unit Gaussian")
    {
        const auto inv = invariant_density(ho_velocity_field(0), 1.0, {-8, 8, EndKind::truncated, EndKind::truncated});
        CHECK(inv.density.integral() == Approx(1.0).epsilon(1e-12));
        for (double x : {-2.0, 0.0, 1.3})
            CHECK(inv.density.interpolate(x) == Approx(oracle::phi(0, x) * oracle::phi(0, x)).epsilon(1e-4));
        CHECK(inv.singular_ends.empty());
    }
    SUBCASE("n = 1 drift on the positive half-line")
    {
        const auto inv = invariant_density(ho_velocity_field(1), 1.0, {0, 8, EndKind::node, EndKind::truncated});
        for (double x : {0.3, 1.0, 2.5})
            CHECK(inv.density.interpolate(x) == Approx(2 * oracle::phi(1, x) * oracle::phi(1, x)).epsilon(1e-4));
    }
    SUBCASE("zero drift on the unit interval")
    {
        const auto inv = invariant_density(zero_velocity_field(), 0.7, {0, 1});
        CHECK(inv.density.min_value() == Approx(1.0));
        CHECK(inv.density.interpolate(0.5) == Approx(1.0));
    }
    CHECK_THROWS_AS(invariant_density(zero_velocity_field(), 0.0, {0, 1}), DomainError);
}

TEST_CASE("self-adjoint coefficients")
{
    const auto ou = self_adjoint_coeffs(ho_velocity_field(0), 1.0, {-5, 5});
    for (double x : {-2.0, 0.0, 3.0})
        CHECK(ou.q(x) == Approx(x * x / 4 - 0.5));
    const auto zero = self_adjoint_coeffs(zero_velocity_field(), 2.0, {0, 1});
    CHECK(zero.q(0.3) == 0.0);
    const auto n1 = self_adjoint_coeffs(ho_velocity_field(1), 1.0, {0, 6, EndKind::node, EndKind::truncated});
    for (double x : {0.2, 1.0, 2.0}) {
        const double v = 2 / x - x, dv = -2 / (x * x) - 1;
        CHECK(n1.q(x) == Approx(v * v / 4 + dv / 2));
    }
}

TEST_CASE("Sturm-Liouville: n = 2 drift between its nodes")
{
    const auto dec = solve(2, middle, 6, true);
    std::vector<double> odd, even;
    for (std::size_t k = 0; k < dec.count(); ++k)
        (is_odd(dec.eigenfunctions[k]) ? odd : even).push_back(dec.eigenvalues[k]);
    REQUIRE(odd.size() == 3);
    REQUIRE(even.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(odd[k] == Approx(oracle::n2_odd_mu[k]).epsilon(1e-7));
        CHECK(std::abs(even[k] - oracle::n2_even_mu[k]) < 1e-6 * std::max(1.0, oracle::n2_even_mu[k]));
    }
    // The printed values 7.44, 37.06, 86.41.
    CHECK(std::abs(odd[0] - 7.44) < 0.01);
    CHECK(std::abs(odd[1] - 37.06) < 0.01);
    CHECK(std::abs(odd[2] - 86.41) < 0.01);

    const auto plain = solve(2, middle, 4, false, 2000, SLScheme::potential_form);
    CHECK(plain.eigenvalues[1] == Approx(oracle::n2_odd_mu[0]).epsilon(1e-4));
}

TEST_CASE("Sturm-Liouville: oscillator spectrum and eigenfunctions")
{
    const auto dec = solve(0, {-10, 10, EndKind::truncated, EndKind::truncated}, 6, false, 2000);
    for (std::size_t k = 0; k < dec.count(); ++k)
        CHECK(std::abs(dec.eigenvalues[k] - static_cast<double>(k)) < 1e-4 * static_cast<double>(k + 1));
    CHECK(std::abs(dec.eigenvalues[0]) < 1e-10);

    // G_0 is proportional to sqrt(h); the family is orthonormal.
    const auto& g0 = dec.eigenfunctions[0].segment(0);
    const auto& h = dec.invariant.segment(0);
    for (std::size_t i = 0; i < g0.size(); i += 97)
        CHECK(g0.values[i] == Approx(std::sqrt(h.values[i])).epsilon(1e-6));
    for (std::size_t a = 0; a < dec.count(); ++a)
        for (std::size_t b = 0; b < dec.count(); ++b) {
            const auto& ga = dec.eigenfunctions[a].segment(0);
            const auto& gb = dec.eigenfunctions[b].segment(0);
            double dot = 0.0;
            for (std::size_t i = 0; i < ga.size(); ++i)
                dot += ga.values[i] * gb.values[i] * ga.w[i];
            CHECK(dot == Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
        }
    for (std::size_t k = 0; k < dec.count(); ++k)
        CHECK(sign_changes(dec.eigenfunctions[k], 1e-8) == static_cast<int>(k));
}

TEST_CASE("Sturm-Liouville: first excited drift, half-line")
{
    const auto dec = solve(1, {0, 12, EndKind::node, EndKind::truncated}, 4, true);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(dec.eigenvalues[k] - 2.0 * static_cast<double>(k)) < 1e-5);
    const auto outer = solve(2, {1, 12, EndKind::node, EndKind::truncated}, 4, true);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(outer.eigenvalues[k] - oracle::n2_outer_mu[k]) < 1e-4);
}

TEST_CASE("Sturm-Liouville: bad requests")
{
    CHECK_THROWS_AS(solve(0, {-5, 5, EndKind::truncated, EndKind::truncated}, 0), DomainError);
    CHECK_THROWS_AS(solve(0, {-5, 5, EndKind::truncated, EndKind::truncated}, 50, false, 20), DomainError);
}

TEST_CASE("expansion coefficients")
{
    const auto dec = solve(0, {-10, 10, EndKind::truncated, EndKind::truncated}, 30, false, 2000);
    const auto& h = dec.invariant;

    const auto c_h = expand_initial(h, dec);
    CHECK(c_h[0] == Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < c_h.size(); ++k)
        CHECK(std::abs(c_h[k]) < 1e-10);

    // Impulse at a cell centre: c_n = G_n(x0) / sqrt(h(x0)).
    const auto& seg = h.segment(0);
    const std::size_t i0 = 1100;
    const auto delta = hat_delta(h, seg.x[i0]);
    const auto c_d = expand_initial(delta, dec);
    for (std::size_t k : {0u, 3u, 11u}) {
        const double g = dec.eigenfunctions[k].segment(0).values[i0];
        CHECK(c_d[k] == Approx(g / std::sqrt(seg.values[i0])).epsilon(1e-10));
    }

    const auto shifted = h.map([&](double x, double) { return 0.5 * h.interpolate(x) + 0.5 * oracle::ou(x, 50, 1.5); });
    CHECK(expand_initial(shifted, dec)[0] == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spectral evolution")
{
    const Interval line{-10, 10, EndKind::truncated, EndKind::truncated};
    const auto dec = solve(0, line, 60, false, 2000);
    const auto f0 = dec.invariant.map([](double x, double) { return oracle::ou(x, 0.3, 2.0); });
    const auto c = expand_initial(f0, dec);

    const auto at0 = evolve_spectral(dec, c, 0.0);
    CHECK(l1_distance(at0.density, f0) < 1e-8);
    const auto late = evolve_spectral(dec, c, 40.0);
    CHECK(l1_distance(late.density, dec.invariant) < 1e-10);

    // Point source at a cell centre: compare with the OU kernel.
    const auto& seg = dec.invariant.segment(0);
    const double x0 = seg.x[1100];
    const auto c_d = expand_initial(hat_delta(dec.invariant, x0), dec);
    const auto kernel = evolve_spectral(dec, c_d, 1.0).density;
    const auto exact = kernel.map([&](double x, double) { return oracle::ou(x, 1.0, x0); });
    CHECK(l1_distance(kernel, exact) < 1e-3);

    CHECK_THROWS_AS(evolve_spectral(dec, c, -1.0), DomainError);
}

TEST_CASE("decomposition by nodes and the multi-interval evolution")
{
    const auto v = ho_velocity_field(1);
    const auto decs = decompose(v, 1.0, 8.0, 20);
    REQUIRE(decs.size() == 2);
    CHECK(decs[0].interval.hi == Approx(0.0));
    CHECK(decs[1].interval.lo == Approx(0.0));

    const GridFunction grid = fp_grid(v, 8.0, 4000);
    const auto f0 = grid.map([](double x, double) { return x > 0 ? 1.4 * oracle::ou(x, 0.5, 1.0) : 0.6 * oracle::ou(x, 0.5, -1.0); });
    const auto late = evolve_spectral(decs, f0, 30.0);
    const auto masses = late.density.segment_masses();
    const auto m0 = f0.segment_masses();
    CHECK(masses[0] == Approx(m0[0]).epsilon(1e-8));
    CHECK(masses[1] == Approx(m0[1]).epsilon(1e-8));

    const auto js = to_json(decs[1]);
    CHECK(js.contains("eigenvalues"));
    CHECK(js["interval"]["lo_kind"] == "node");
    CHECK(js["eigenvalues"].size() == 20);
}

TEST_CASE("confluent eigenvalues on oscillator intervals")
{
    const auto any = ho_interval_eigenvalues(2, middle, 3);
    CHECK(std::abs(any[0]) < 1e-9);
    CHECK(any[1] == Approx(oracle::n2_odd_mu[0]).epsilon(1e-9));
    CHECK(any[2] == Approx(oracle::n2_even_mu[1]).epsilon(1e-9));

    const auto odd = ho_interval_eigenvalues(2, middle, 3, Parity::odd);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(odd[k] == Approx(oracle::n2_odd_mu[k]).epsilon(1e-10));

    const auto half = ho_interval_eigenvalues(1, {0, 12, EndKind::node, EndKind::truncated}, 3);
    const auto sl = solve(1, {0, 12, EndKind::node, EndKind::truncated}, 3, true);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(half[k] - sl.eigenvalues[k]) < 1e-5);

    const auto outer = ho_interval_eigenvalues(2, {1, 12, EndKind::node, EndKind::truncated}, 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(outer[k] - oracle::n2_outer_mu[k]) < 1e-9);

    CHECK(std::abs(ho_interval_determinant(2, middle, oracle::n2_odd_mu[1], Parity::odd)) < 1e-9);
    CHECK_THROWS_AS(ho_interval_eigenvalues(-1, middle, 3), DomainError);
    CHECK_THROWS_AS(ho_interval_eigenvalues(2, {0.0, 1.0, EndKind::regular, EndKind::node}, 3, Parity::odd),
                    DomainError);
}
