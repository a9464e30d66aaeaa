#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varlex/norms.hpp"
#include "varlex/random_fields.hpp"

#include <cmath>

using namespace varlex;

namespace {

Box unit_box() {
    return Box{1, {0.5, 0.0}, 0.5};
}

// Direct discrete p-norm (sum over cells), independent of the bisection.
double direct_p_norm(const GridFunction& f, double p) {
    double sum = 0.0;
    for (double v : f.values) sum += std::pow(std::abs(v), p);
    return std::pow(sum * f.grid.cell_measure(), 1.0 / p);
}

} // namespace

TEST_CASE("constant-exponent norms match the closed form") {
    const Grid g{unit_box(), 6};
    const CubeLattice lat(g.box, 0, 6);
    for (double pval : {1.5, 2.0, 3.0}) {
        const GPhiFunction phi = GPhiFunction::power(ExponentField::constant(g.box, pval));
        const GridFunction f = random_test_function(g, lat, 17u + static_cast<uint64_t>(pval));
        const NormResult r = luxemburg_norm(phi, f);
        CHECK(r.value == doctest::Approx(direct_p_norm(f, pval)).epsilon(1e-12));
    }
}

TEST_CASE("variable-exponent norms agree with a dense lambda scan") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const ExponentField p = ExponentField::affine(g.box, {1.0, 0.0}, 1.5, 1.5, 2.5);
    const GPhiFunction phi = GPhiFunction::power_log(p, ExponentField::constant(g.box, 0.5));
    const GridFunction f = random_test_function(g, lat, 23);

    const NormResult r = luxemburg_norm(phi, f, 1e-12);
    REQUIRE(r.value > 0.0);
    CHECK(r.modular_at_value == doctest::Approx(1.0).epsilon(1e-9));

    // Oracle: scan a fine geometric lambda grid; the norm is the infimum of
    // lambdas whose modular does not exceed 1.
    const int steps = 4000;
    double best = r.value * 2.0;
    for (int i = 0; i <= steps; ++i) {
        const double lambda =
            r.value * 0.5 * std::pow(4.0, static_cast<double>(i) / steps);
        if (modular(phi, f, nullptr, lambda) <= 1.0) {
            best = lambda;
            break;
        }
    }
    CHECK(r.value == doctest::Approx(best).epsilon(2e-3));
}

TEST_CASE("luxemburg norm is positively homogeneous and vanishes only at zero") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const ExponentField p = ExponentField::log_smooth(g.box, 2.0, 0.4);
    const GPhiFunction phi = GPhiFunction::power(p);
    const GridFunction f = random_test_function(g, lat, 5);
    const double base = luxemburg_norm(phi, f).value;
    REQUIRE(base > 0.0);

    GridFunction scaled = f;
    for (double& v : scaled.values) v *= 37.5;
    CHECK(luxemburg_norm(phi, scaled).value == doctest::Approx(37.5 * base).epsilon(1e-9));

    const GridFunction zero(g, 0.0);
    CHECK(luxemburg_norm(phi, zero).value == 0.0);
}

TEST_CASE("norms handle extreme magnitudes by steering the bracket") {
    const Grid g{unit_box(), 4};
    const ExponentField p = ExponentField::affine(g.box, {1.0, 0.0}, 1.5, 1.5, 2.5);
    const GPhiFunction phi = GPhiFunction::power(p);
    GridFunction f(g, 0.0);
    f[3] = 1e200;
    const NormResult big = luxemburg_norm(phi, f);
    CHECK(std::isfinite(big.value));
    CHECK(big.modular_at_value == doctest::Approx(1.0).epsilon(1e-8));

    f[3] = 1e-200;
    const NormResult small = luxemburg_norm(phi, f);
    CHECK(small.value > 0.0);
    CHECK(small.modular_at_value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("indicator norms at constant exponent equal the measure power") {
    const Box box = unit_box();
    const CubeLattice lat(box, 0, 5);
    for (double pval : {1.5, 2.0, 3.0}) {
        const GPhiFunction phi = GPhiFunction::power(ExponentField::constant(box, pval));
        for (const DyadicCube& q : lat.cubes(false)) {
            const NormResult r = chi_norm(phi, box, q.rect, 64);
            CHECK(r.value ==
                  doctest::Approx(std::pow(q.measure(), 1.0 / pval)).epsilon(1e-10));
        }
    }
}

TEST_CASE("indicator norms on the global grid match the measure power") {
    const Box box = unit_box();
    const Grid g{box, 6};
    const CubeLattice lat(box, 0, 4);
    const GPhiFunction phi = GPhiFunction::power(ExponentField::constant(box, 2.0));
    for (const DyadicCube& q : lat.cubes(false)) {
        const NormResult r = chi_norm_on_grid(phi, g, q.rect);
        CHECK(r.value == doctest::Approx(std::sqrt(q.measure())).epsilon(1e-12));
    }
}

TEST_CASE("weighted norms multiply the weight in before measuring") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const ExponentField p = ExponentField::constant(g.box, 2.0);
    const GridFunction f = random_test_function(g, lat, 31);
    const GridFunction w = random_weight(g, 3.0, 77);

    GridFunction fw(g);
    for (int64_t i = 0; i < f.size(); ++i) fw[i] = f[i] * w[i];
    CHECK(weighted_norm(p, f, w).value ==
          doctest::Approx(direct_p_norm(fw, 2.0)).epsilon(1e-12));
}

TEST_CASE("cube norm ratios reduce to measure fractions for indicators") {
    const Box box = unit_box();
    const Grid g{box, 6};
    const CubeLattice lat(box, 0, 3);
    const GPhiFunction phi = GPhiFunction::power(ExponentField::constant(box, 2.0));
    const DyadicCube q = lat.cube_at(1, {0, 0}); // [0, 1/2]

    GridFunction f(g, 0.0); // indicator of [0, 1/4] = left half of q
    g.for_cells_in(Rect{1, {0.0, 0.0}, {0.25, 0.0}}, [&](int64_t i, const Point&) {
        f[i] = 1.0;
    });
    CHECK(cube_norm_ratio(phi, f, q) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const CubeLattice deep(box, 0, 6);
    const DyadicCube outside = deep.cube_at(6, {63, 0});
    GridFunction g2(Grid{Box{1, {10.5, 0.0}, 0.5}, 6}, 1.0);
    CHECK_THROWS_AS(cube_norm_ratio(phi, g2, outside), std::domain_error);
}

TEST_CASE("conjugate norms track the classical dual norm for p = 2") {
    const Grid g{unit_box(), 5};
    const CubeLattice lat(g.box, 0, 5);
    const GPhiFunction phi = GPhiFunction::power(ExponentField::constant(g.box, 2.0));
    const ConjugationGrid cgrid = ConjugationGrid::geometric();
    const GridFunction f = random_test_function(g, lat, 41);
    REQUIRE(f.max_abs() > 0.0);

    // The conjugate of t^2 is u^2/4, whose Luxemburg norm is ||f||_2 / 2; the
    // grid-sup conjugate under-approximates, so the norm can only shrink.
    const double expected = 0.5 * direct_p_norm(f, 2.0);
    const NormResult r = conjugate_norm(phi, cgrid, f);
    CHECK(r.value <= expected * (1.0 + 1e-9));
    CHECK(r.value >= 0.9 * expected);
}
