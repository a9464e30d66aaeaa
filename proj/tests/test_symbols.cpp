#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varlex/symbols.hpp"
#include "varlex/random_fields.hpp"

#include <cmath>

using namespace varlex;

namespace {

Box unit_box() { return Box{1, {0.5, 0.0}, 0.5}; }

GridFunction coordinate(const Grid& g) {
    GridFunction b(g);
    for (int64_t i = 0; i < g.cell_count(); ++i) b[i] = g.cell_midpoint(i)[0];
    return b;
}

} // namespace

TEST_CASE("the BMO-type seminorm of the coordinate is a quarter of the box side") {
    // For b(x) = x on a cube of side l, the mean distance to the cube average
    // is l/4; with symmetric midpoint samples the discrete value is exactly
    // l/4 as well, so the sup over all cubes is attained at the root.
    const Grid g{unit_box(), 6};
    const CubeLattice lat(g.box, 0, 6);
    const SymbolReport rep = lipschitz_seminorm(coordinate(g), CubeFunctional::one(), 1.0, lat);
    CHECK(rep.seminorm == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.worst_cube.level == 0);
    CHECK(rep.t_infinity == 1.0);
    CHECK(rep.rho == 1.0);
    CHECK(rep.cube_count == 127); // sum of 2^j over j = 0..6
}

TEST_CASE("seminorms are shift-invariant and positively homogeneous") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const GridFunction b = random_holder_symbol(g, 0.7, 17);
    const CubeFunctional a = CubeFunctional::power(1, 0.7);
    const double base = lipschitz_seminorm(b, a, 1.0, lat).seminorm;
    REQUIRE(base > 0.0);

    GridFunction shifted = b;
    for (double& v : shifted.values) v += 3.25;
    CHECK(lipschitz_seminorm(shifted, a, 1.0, lat).seminorm ==
          doctest::Approx(base).epsilon(1e-13));

    GridFunction scaled = b;
    for (double& v : scaled.values) v *= 5.0;
    CHECK(lipschitz_seminorm(scaled, a, 1.0, lat).seminorm ==
          doctest::Approx(5.0 * base).epsilon(1e-13));
}

TEST_CASE("raising rho can only raise the normalized oscillation") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const GridFunction b = random_holder_symbol(g, 0.5, 23);
    const auto [at_two, at_one] =
        seminorm_equivalence_check(b, CubeFunctional::one(), 2.0, lat);
    CHECK(at_two >= at_one * (1.0 - 1e-12));
    CHECK(at_one > 0.0);
}

TEST_CASE("the t-infinity constant tracks the worst nested functional ratio") {
    const Box box = unit_box();
    const Grid g{box, 4};
    const CubeLattice lat(box, 0, 4);
    const GridFunction b = coordinate(g);

    // |Q|^{delta} shrinks with the cube, so descendant/ancestor stays <= 1.
    const SymbolReport mono = lipschitz_seminorm(b, CubeFunctional::power(1, 0.5), 1.0, lat);
    CHECK(mono.t_infinity == 1.0);

    // a(Q) = |Q|^{-1/2} doubles the ratio every two levels; over 4 levels the
    // worst descendant/ancestor pair is (2^{-4})^{-1/2} / 1 = 4.
    const CubeFunctional grow =
        CubeFunctional::custom([](const Rect& r) { return 1.0 / std::sqrt(r.measure()); });
    const SymbolReport rep = lipschitz_seminorm(b, grow, 1.0, lat);
    CHECK(rep.t_infinity == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected with the violated requirement") {
    const Grid g{unit_box(), 3};
    const CubeLattice lat(g.box, 0, 3);
    const GridFunction b = coordinate(g);
    CHECK_THROWS_AS(lipschitz_seminorm(b, CubeFunctional::one(), 0.5, lat), std::domain_error);
    const CubeFunctional zero = CubeFunctional::custom([](const Rect&) { return 0.0; });
    CHECK_THROWS_AS(lipschitz_seminorm(b, zero, 1.0, lat), std::domain_error);
    CHECK_THROWS_AS(CubeFunctional::power(1, 0.0), std::domain_error);
}

TEST_CASE("oscillation norm ratios match the discrete second moment") {
    const Grid g{unit_box(), 6};
    const CubeLattice lat(g.box, 0, 6);
    const GridFunction b = coordinate(g);
    const ExponentField p = ExponentField::constant(g.box, 2.0);
    const DyadicCube root = lat.cube_at(0, {0, 0});

    // ||x - 1/2||_2 / ||1||_2 over N equispaced midpoints is the discrete
    // standard deviation sqrt((1 - 1/N^2)/12).
    const double n = static_cast<double>(g.cell_count());
    const double expected = std::sqrt((1.0 - 1.0 / (n * n)) / 12.0);
    CHECK(oscillation_norm_ratio(b, p, 1, root) == doctest::Approx(expected).epsilon(1e-11));

    // k = 2 at p = 2: compare against the direct discrete fourth moment.
    double fourth = 0.0;
    for (int64_t i = 0; i < g.cell_count(); ++i) {
        const double d = g.cell_midpoint(i)[0] - 0.5;
        fourth += d * d * d * d;
    }
    CHECK(oscillation_norm_ratio(b, p, 2, root) ==
          doctest::Approx(std::sqrt(fourth / n)).epsilon(1e-11));

    CHECK_THROWS_AS(oscillation_norm_ratio(b, p, 0, root), std::invalid_argument);
    const ExponentField p1 = ExponentField::constant(g.box, 1.0);
    CHECK_THROWS_AS(oscillation_norm_ratio(b, p1, 1, root), std::domain_error);
}

TEST_CASE("dilated-average gaps vanish for odd-symmetric symbols") {
    const Grid g{unit_box(), 6};
    const CubeLattice lat(g.box, 0, 6);
    const GridFunction b = coordinate(g);

    // Q = [1/4, 1/2]: 3Q = [0, 3/4] stays inside the box and both averages
    // sit at the shared center 3/8.
    bool clipped = true;
    const DyadicCube q = lat.cube_at(2, {1, 0});
    CHECK(nested_average_gap(b, q, &clipped) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK_FALSE(clipped);

    // The root's triple leaves the box, so the clipped flag must be set and
    // the gap collapses to |b_box - b_box| = 0.
    const DyadicCube root = lat.cube_at(0, {0, 0});
    CHECK(nested_average_gap(b, root, &clipped) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(clipped);

    // A quadratic symbol on the same interior cube: compare with the direct
    // discrete averages over the two cell sets.
    GridFunction bsq(g);
    for (int64_t i = 0; i < g.cell_count(); ++i) {
        const double x = g.cell_midpoint(i)[0];
        bsq[i] = x * x;
    }
    double in_q = 0.0, in_3q = 0.0;
    int64_t nq = 0, n3q = 0;
    g.for_cells_in(q.rect, [&](int64_t i, const Point&) { in_q += bsq[i]; ++nq; });
    g.for_cells_in(q.rect.scaled(3.0).intersect(g.box.rect()),
                   [&](int64_t i, const Point&) { in_3q += bsq[i]; ++n3q; });
    const double expected = std::abs(in_3q / static_cast<double>(n3q) -
                                     in_q / static_cast<double>(nq));
    CHECK(nested_average_gap(bsq, q, &clipped) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("variable-norm functionals reduce to measure powers at constant exponent") {
    const Box box = unit_box();
    const ExponentField d = ExponentField::constant(box, 0.5);
    const CubeFunctional var = CubeFunctional::variable_norm(d);
    const CubeFunctional pow_half = CubeFunctional::power(1, 0.5);
    const CubeLattice lat(box, 0, 4);
    for (const DyadicCube& q : lat.cubes(false)) {
        CHECK(var(q) == doctest::Approx(pow_half(q)).epsilon(1e-10));
    }
}

TEST_CASE("fractional power averages hit their closed forms") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const DyadicCube root = lat.cube_at(0, {0, 0});
    const ExponentField p1 = ExponentField::constant(g.box, 1.0);

    // Constant functions give ratio exactly 1 for any 0 < nu < 1.
    const GridFunction c(g, 3.7);
    CHECK(power_average_ratio(c, p1, 0.5, root) == doctest::Approx(1.0).epsilon(1e-12));

    // Indicator of the left half at nu = 1/2: (|Q|/2) / (sqrt(1/2) |Q|).
    GridFunction half(g, 0.0);
    g.for_cells_in(Rect{1, {0.0, 0.0}, {0.5, 0.0}},
                   [&](int64_t i, const Point&) { half[i] = 1.0; });
    CHECK(power_average_ratio(half, p1, 0.5, root) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const GridFunction zero(g, 0.0);
    CHECK_THROWS_AS(power_average_ratio(zero, p1, 0.5, root), std::domain_error);
}

TEST_CASE("pointwise smoothness sampling stays finite for true Hoelder symbols") {
    const Grid g{unit_box(), 6};
    const CubeLattice lat(g.box, 0, 6);
    GridFunction b(g);
    for (int64_t i = 0; i < g.cell_count(); ++i) {
        b[i] = std::sqrt(std::abs(g.cell_midpoint(i)[0] - 0.5));
    }
    const ExponentField d = ExponentField::constant(g.box, 0.5);
    const PointwiseLipschitzReport rep =
        variable_lipschitz_pointwise_check(b, d, 400, lat, 3, 7);
    // Coincident draws are skipped, so slightly fewer pairs than the budget.
    CHECK(rep.pair_count > 350);
    CHECK(rep.pair_count <= 400);
    CHECK(rep.pair_constant > 0.0);
    CHECK(std::isfinite(rep.pair_constant));
    // |sqrt|x-c|| differences are bounded by |x-z|^{1/2} with constant 1;
    // grid sampling cannot exceed it by more than roundoff.
    CHECK(rep.pair_constant <= 1.0 + 1e-9);
    CHECK(std::isfinite(rep.cube_constant));
    CHECK(rep.cube_constant > 0.0);
}
