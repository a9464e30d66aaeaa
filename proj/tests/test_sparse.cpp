#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varlex/sparse.hpp"
#include "varlex/norms.hpp"
#include "varlex/random_fields.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace varlex;

namespace {

Box unit_box() { return Box{1, {0.5, 0.0}, 0.5}; }

// Level-major position of the dyadic cube (level, index 0) below one root.
size_t tower_position(int level) {
    size_t pos = 0;
    for (int l = 0; l < level; ++l) pos += size_t{1} << l;
    return pos;
}

} // namespace

TEST_CASE("stopping classes sandwich their value between powers of alpha") {
    const double alpha = 4.0;
    CHECK(stopping_class(2.0, alpha) == 0);
    CHECK(stopping_class(1.0, alpha) == -1);  // alpha^-1 < 1 <= alpha^0
    CHECK(stopping_class(4.0, alpha) == 0);   // alpha^0  < 4 <= alpha^1
    CHECK(stopping_class(4.0 + 1e-9, alpha) == 1);
    for (double g : {1e-9, 0.3, 7.0, 123.0, 1e9}) {
        const int k = stopping_class(g, alpha);
        CHECK(std::pow(alpha, k) < g);
        CHECK(g <= std::pow(alpha, k + 1));
    }
    CHECK_THROWS_AS(stopping_class(0.0, alpha), std::domain_error);
    CHECK_THROWS_AS(stopping_class(1.0, 1.0), std::domain_error);
}

TEST_CASE("a constant functional selects exactly the lattice roots once") {
    const CubeLattice lat(unit_box(), 0, 5);
    const std::vector<DyadicCube> cubes = lat.cubes(false);
    const std::vector<double> g(cubes.size(), 3.0);
    const StoppingFamily fam = build_stopping_family(g, 4.0, lat);

    CHECK(fam.k_lo == 0); // stopping class of 3.0 at alpha = 4
    CHECK(fam.k_hi == 0);
    CHECK(fam.level_count() == 1);
    REQUIRE(fam.at(0).size() == 1);
    const StoppingEntry& e = fam.at(0).front();
    CHECK(e.cube.level == 0);
    CHECK(e.g_value == 3.0);
    CHECK(e.intersection_measure == 0.0);
    CHECK(e.residual_measure == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fam.packing_ok);
    CHECK(fam.positive_count == static_cast<int64_t>(cubes.size()));
}

TEST_CASE("an indicator tower produces the hand-computed selection chain") {
    // G doubles along the leftmost tower (levels 0..6) and vanishes off it:
    // classes are ceil(level/2) - 1, thresholds k = -1..2 select the tower
    // cubes at levels 0, 1, 3, 5 with known intersection measures.
    const CubeLattice lat(unit_box(), 0, 6);
    const std::vector<DyadicCube> cubes = lat.cubes(false);
    std::vector<double> g(cubes.size(), 0.0);
    for (int level = 0; level <= 6; ++level) {
        g[tower_position(level)] = std::ldexp(1.0, level); // 2^level
    }
    const StoppingFamily fam = build_stopping_family(g, 4.0, lat);

    CHECK(fam.k_lo == -1);
    CHECK(fam.k_hi == 2);
    REQUIRE(fam.level_count() == 4);
    const int expected_levels[] = {0, 1, 3, 5};
    const double expected_inter[] = {0.5, 0.125, 1.0 / 32.0, 0.0};
    for (int k = -1; k <= 2; ++k) {
        REQUIRE(fam.at(k).size() == 1);
        const StoppingEntry& e = fam.at(k).front();
        CHECK(e.cube.level == expected_levels[k + 1]);
        CHECK(e.intersection_measure == doctest::Approx(expected_inter[k + 1]).epsilon(1e-14));
        CHECK(e.residual_measure ==
              doctest::Approx(e.cube.measure() - expected_inter[k + 1]).epsilon(1e-14));
    }
    // Worst packing ratio is the root's |Q cap D_0|/|Q| = 1/2, scaled by alpha.
    CHECK(fam.packing_constant == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fam.packing_ok);
}

TEST_CASE("stopping families from random norm ratios keep the measured invariants") {
    const Grid grid{unit_box(), 6};
    const CubeLattice lat(grid.box, 0, 6);
    const ExponentField tau = ExponentField::constant(grid.box, 2.0);

    for (uint64_t seed : {1u, 2u, 3u}) {
        const GridFunction f = random_test_function(grid, lat, seed);
        const GridFunction w = random_weight(grid, 2.0, seed + 100);
        GridFunction gw(grid);
        for (int64_t i = 0; i < grid.cell_count(); ++i) gw[i] = f[i] * w[i];

        const std::vector<double> values = norm_ratio_values(tau, gw, lat);
        const StoppingFamily fam = build_stopping_family(values, 4.0, lat);
        if (fam.level_count() == 0) continue;

        CHECK(fam.packing_constant < 4.0);
        CHECK(fam.packing_ok);

        // Reconstruct residual sets on the grid cells: every cell may be
        // covered by at most one residual F_{k,j} per threshold, and the
        // strict measure inequality |Q| < (1 - Pi/alpha)^{-1} |F| holds.
        const double slack = 1.0 - fam.packing_constant / 4.0;
        std::map<int64_t, int> cover;
        for (int k = fam.k_lo; k <= fam.k_hi; ++k) {
            // Cells of the next threshold's selected cubes.
            std::set<int64_t> next_cells;
            if (k < fam.k_hi) {
                for (const StoppingEntry& e : fam.at(k + 1)) {
                    grid.for_cells_in(e.cube.rect, [&](int64_t i, const Point&) {
                        next_cells.insert(i);
                    });
                }
            }
            for (const StoppingEntry& e : fam.at(k)) {
                CHECK(e.residual_measure > slack * e.cube.measure() * (1.0 - 1e-12));
                CHECK(e.intersection_measure + e.residual_measure ==
                      doctest::Approx(e.cube.measure()).epsilon(1e-12));
                grid.for_cells_in(e.cube.rect, [&](int64_t i, const Point&) {
                    if (next_cells.count(i) == 0) cover[i] += 1;
                });
            }
        }
        for (const auto& [cell, count] : cover) CHECK(count == 1);
    }
}

TEST_CASE("selected cubes at one threshold are pairwise disjoint and maximal") {
    // Two towers (left and right edge) give two selected cubes per class.
    const CubeLattice lat(unit_box(), 0, 4);
    const std::vector<DyadicCube> cubes = lat.cubes(false);
    std::vector<double> g(cubes.size(), 0.0);
    for (size_t pos = 0, level = 0; level <= 4; ++level) {
        const size_t count = size_t{1} << level;
        g[pos] = std::ldexp(1.0, static_cast<int>(level));         // leftmost
        g[pos + count - 1] = std::ldexp(1.0, static_cast<int>(level)); // rightmost
        pos += count;
    }
    const StoppingFamily fam = build_stopping_family(g, 4.0, lat);
    for (int k = fam.k_lo; k <= fam.k_hi; ++k) {
        const auto& entries = fam.at(k);
        if (k > fam.k_lo) CHECK(entries.size() == 2);
        for (size_t a = 0; a < entries.size(); ++a) {
            for (size_t b = a + 1; b < entries.size(); ++b) {
                const Rect inter = entries[a].cube.rect.intersect(entries[b].cube.rect);
                CHECK(inter.measure() == 0.0);
            }
        }
    }
}

TEST_CASE("family construction validates its inputs") {
    const CubeLattice lat(unit_box(), 0, 3);
    const size_t n = lat.cubes(false).size();
    CHECK_THROWS_AS(build_stopping_family(std::vector<double>(n, 1.0), 1.0, lat),
                    std::domain_error);
    CHECK_THROWS_AS(build_stopping_family(std::vector<double>(n - 1, 1.0), 4.0, lat),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_stopping_family(std::vector<double>(n, -0.5), 4.0, lat),
                    std::domain_error);
}

TEST_CASE("norm ratios per cube agree with the direct definition") {
    const Grid grid{unit_box(), 5};
    const CubeLattice lat(grid.box, 0, 5);
    const ExponentField tau = ExponentField::constant(grid.box, 2.0);
    const GridFunction gw = random_test_function(grid, lat, 55);
    const GPhiFunction phi = GPhiFunction::power(tau);

    const std::vector<double> values = norm_ratio_values(tau, gw, lat);
    const std::vector<DyadicCube> cubes = lat.cubes(false);
    REQUIRE(values.size() == cubes.size());
    for (size_t i = 0; i < cubes.size(); ++i) {
        CHECK(values[i] == doctest::Approx(cube_norm_ratio(phi, gw, cubes[i])).epsilon(1e-11));
    }
}

TEST_CASE("the cube-tower majorant dominates the commutator pointwise") {
    const Grid grid{unit_box(), 5};
    const CubeLattice lat(grid.box, 0, 5);
    const Kernel kernel = Kernel::fractional(1, 0.5);
    const GridFunction b = random_holder_symbol(grid, 1.0, 91);

    for (int m : {0, 1, 2}) {
        for (uint64_t seed : {4u, 5u}) {
            const GridFunction f = random_test_function(grid, lat, seed + 10 * m);
            const GridFunction tf = apply_commutator(kernel, b, m, f);
            const MajorantResult maj = dyadic_majorant(kernel, b, m, f, lat);
            for (int64_t i = 0; i < grid.cell_count(); ++i) {
                const double bound = maj.value[i] + maj.self_term[i];
                CHECK(std::abs(tf[i]) <= bound * (1.0 + 1e-12) + 1e-15);
                if (m > 0) CHECK(maj.self_term[i] == 0.0);
            }
        }
    }
}

TEST_CASE("the majorant matches a direct evaluation of its defining sum") {
    const Grid grid{unit_box(), 4};
    const CubeLattice lat(grid.box, 0, 4);
    const Kernel kernel = Kernel::fractional(1, 0.5);
    const GridFunction b = random_holder_symbol(grid, 0.6, 8);
    const GridFunction f = random_test_function(grid, lat, 12);
    const int m = 1;

    const MajorantResult maj = dyadic_majorant(kernel, b, m, f, lat);
    CHECK_FALSE(maj.value.values.empty());

    const double cell = grid.cell_measure();
    const Rect box_rect = grid.box.rect();
    for (int64_t i = 0; i < grid.cell_count(); ++i) {
        const Point x = grid.cell_midpoint(i);
        double total = 0.0;
        for (const DyadicCube& q : lat.cubes(false)) {
            if (!q.rect.contains(x)) continue;
            // Cube average of b over grid cells in Q.
            double bsum = 0.0;
            int64_t bcount = 0;
            grid.for_cells_in(q.rect, [&](int64_t j, const Point&) {
                bsum += b[j];
                ++bcount;
            });
            const double bq = bsum / static_cast<double>(bcount);
            const Rect triple = q.rect.scaled(3.0).intersect(box_rect);
            const double kq = k_bar(kernel, q.side_length() / 2.0);
            // Binomial expansion of |b(x)-b_Q|^{m-j} moments against f.
            for (int j = 0; j <= m; ++j) {
                double mom = 0.0;
                grid.for_cells_in(triple, [&](int64_t c, const Point&) {
                    mom += std::pow(std::abs(b[c] - bq), j) * f[c] * cell;
                });
                const double binom = (m == 1) ? 1.0 : 1.0; // C(1,0)=C(1,1)=1
                total += binom * kq * std::pow(std::abs(b[i] - bq), m - j) * mom;
            }
        }
        CHECK(maj.value[i] == doctest::Approx(total).epsilon(1e-10));
    }
}

TEST_CASE("majorants flag mass clipped by the domain boundary") {
    const Grid grid{unit_box(), 4};
    const CubeLattice lat(grid.box, 0, 4);
    const Kernel kernel = Kernel::fractional(1, 0.5);
    const GridFunction b(grid, 0.0);
    GridFunction f(grid, 0.0);
    f[0] = 1.0; // mass next to the left edge: 3Q of small cubes exits the box
    const MajorantResult maj = dyadic_majorant(kernel, b, 0, f, lat);
    CHECK(maj.clipped_mass_warning);

    const CubeLattice shallow(grid.box, 0, 3);
    CHECK_THROWS_AS(dyadic_majorant(kernel, b, 0, f, shallow), std::invalid_argument);
}

TEST_CASE("disjoint cube sums normalize to one on the root and stay bounded") {
    const Grid grid{unit_box(), 5};
    const CubeLattice lat(grid.box, 0, 5);
    const ExponentField p = ExponentField::constant(grid.box, 2.0);
    const GridFunction f = random_test_function(grid, lat, 61);
    const GridFunction g = random_test_function(grid, lat, 62);

    const DyadicCube root = lat.cube_at(0, {0, 0});
    CHECK(disjoint_sum_ratio(p, f, g, {root}) == doctest::Approx(1.0).epsilon(1e-10));

    const std::vector<DyadicCube> halves = {lat.cube_at(1, {0, 0}), lat.cube_at(1, {1, 0})};
    const double two_term = disjoint_sum_ratio(p, f, g, halves);
    CHECK(two_term > 0.0);
    CHECK(two_term <= 2.0 + 1e-10); // Cauchy-Schwarz on two disjoint pieces
}

TEST_CASE("localized kernel-tail sums stay below their single-cube bound") {
    const Grid grid{unit_box(), 6};
    const CubeLattice lat(grid.box, 0, 6);
    const Kernel kernel = Kernel::fractional(1, 0.5);
    const ExponentField omega = ExponentField::constant(grid.box, 1.5);
    const GridFunction f = random_test_function(grid, lat, 71);

    const LocalSumReport root_rep =
        local_sum_bound_check(kernel, f, omega, lat.cube_at(0, {0, 0}), lat);
    CHECK(root_rep.rhs > 0.0);
    CHECK(std::isfinite(root_rep.ratio()));
    CHECK(root_rep.clipped); // 3Q0 of the root leaves the box

    const LocalSumReport mid_rep =
        local_sum_bound_check(kernel, f, omega, lat.cube_at(2, {1, 0}), lat);
    CHECK(mid_rep.rhs > 0.0);
    CHECK(std::isfinite(mid_rep.ratio()));

    CHECK_THROWS_AS(
        local_sum_bound_check(kernel, f, omega, lat.cube_at(0, {0, 0}), lat, -1.0, 1.0),
        std::domain_error);
}

TEST_CASE("overlapping dilated sums stay bounded as the depth grows") {
    const Grid grid{unit_box(), 6};
    const CubeLattice lat(grid.box, 0, 6);
    const ExponentField p = ExponentField::constant(grid.box, 2.0);
    const GridFunction f = random_test_function(grid, lat, 81);
    const GridFunction g = random_weight(grid, 2.0, 82);
    const DyadicCube root = lat.cube_at(0, {0, 0});

    double prev = 0.0;
    for (int d : {1, 2, 3, 4}) {
        const double r = overlapping_sum_ratio(p, f, g, root, d, lat);
        CHECK(r > 0.0);
        CHECK(std::isfinite(r));
        CHECK(r < 64.0); // stays bounded rather than doubling with each level
        prev = r;
    }
    (void)prev;
    CHECK_THROWS_AS(overlapping_sum_ratio(p, f, g, root, 7, lat), std::invalid_argument);
}
