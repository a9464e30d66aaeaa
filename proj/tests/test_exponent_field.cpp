#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varlex/exponent_field.hpp"

#include <cmath>
#include <stdexcept>

using namespace varlex;

namespace {

Box unit_box() {
    return Box{1, {0.5, 0.0}, 0.5};
}

} // namespace

TEST_CASE("constant fields expose exact value and extremes") {
    const ExponentField p = ExponentField::constant(unit_box(), 2.5);
    CHECK(p.is_constant());
    CHECK(p({0.3, 0.0}) == 2.5);
    CHECK(p.p_minus() == 2.5);
    CHECK(p.p_plus() == 2.5);
    CHECK(p.value_at_infinity() == 2.5);
}

TEST_CASE("affine fields clamp to the stated interval") {
    const ExponentField p = ExponentField::affine(unit_box(), {4.0, 0.0}, 1.0, 1.5, 2.5);
    CHECK(p({0.25, 0.0}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p({0.0, 0.0}) == 1.5);  // 1.0 clamped up
    CHECK(p({1.0, 0.0}) == 2.5);  // 5.0 clamped down
    CHECK(p.p_minus() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p.p_plus() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("oscillating fields follow the sine formula and stay in band") {
    const Box box = unit_box();
    const ExponentField p = ExponentField::log_smooth(box, 2.0, 0.3);
    for (double x : {0.1, 0.37, 0.62, 0.95}) {
        const double expected = 2.0 + 0.3 * std::sin(3.0 * (x - box.center[0]));
        CHECK(p({x, 0.0}) == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(p.p_minus() >= 1.7 - 1e-12);
    CHECK(p.p_plus() <= 2.3 + 1e-12);
    CHECK(p.value_at_infinity() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("tabulated fields reproduce their cell values") {
    const Grid g{unit_box(), 2};
    const ExponentField p = ExponentField::tabulated(g, {1.5, 2.0, 2.5, 3.0});
    CHECK(p(g.cell_midpoint(0)) == 1.5);
    CHECK(p(g.cell_midpoint(3)) == 3.0);
    CHECK(p.p_minus() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p.p_plus() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("conjugation is pointwise p/(p-1) with exactly swapped extremes") {
    const ExponentField p = ExponentField::affine(unit_box(), {1.0, 0.0}, 2.0, 2.0, 3.0);
    const ExponentField pc = p.conjugate();
    for (double x : {0.1, 0.5, 0.9}) {
        const double v = p({x, 0.0});
        CHECK(pc({x, 0.0}) == doctest::Approx(v / (v - 1.0)).epsilon(1e-14));
    }
    CHECK(pc.p_minus() == doctest::Approx(p.p_plus() / (p.p_plus() - 1.0)).epsilon(1e-14));
    CHECK(pc.p_plus() == doctest::Approx(p.p_minus() / (p.p_minus() - 1.0)).epsilon(1e-14));

    const ExponentField back = pc.conjugate();
    for (double x : {0.2, 0.7}) {
        CHECK(back({x, 0.0}) == doctest::Approx(p({x, 0.0})).epsilon(1e-12));
    }

    const ExponentField not_lebesgue = ExponentField::constant(unit_box(), 1.0);
    CHECK_THROWS_AS(not_lebesgue.conjugate(), std::domain_error);
}

TEST_CASE("scaling by a constant acts pointwise and validates the lower bound") {
    const ExponentField p = ExponentField::constant(unit_box(), 2.0);
    CHECK(p.scaled(3.0)({0.5, 0.0}) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(p.reciprocal_scaled(1.0)({0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(p.scaled(0.25), std::domain_error); // 0.25 < 1/p^-
    CHECK_NOTHROW(p.scaled(0.25, false));
    CHECK_THROWS_AS(ExponentField::constant(unit_box(), 0.0).reciprocal_scaled(1.0),
                    std::domain_error);
}

TEST_CASE("harmonic combinations follow the stated identities") {
    const Box box = unit_box();
    const ExponentField p = ExponentField::constant(box, 2.0);
    const ExponentField q = ExponentField::constant(box, 4.0);

    const ExponentField beta = ExponentField::combine(p, q, ExponentField::CombineMode::Difference);
    CHECK(beta({0.5, 0.0}) == doctest::Approx(4.0).epsilon(1e-14)); // 1/2 - 1/4 = 1/4

    const ExponentField omega = ExponentField::combine(p, q, ExponentField::CombineMode::Sum);
    CHECK(omega({0.5, 0.0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    const ExponentField prod = ExponentField::combine(p, q, ExponentField::CombineMode::Product);
    CHECK(prod({0.5, 0.0}) == doctest::Approx(8.0).epsilon(1e-14));

    CHECK_THROWS_AS(ExponentField::combine(p, p, ExponentField::CombineMode::Difference),
                    std::domain_error);
}

TEST_CASE("difference-type smoothness exponent has the closed constant form") {
    const Box box = unit_box();
    const ExponentField r = ExponentField::constant(box, 3.0);
    const ExponentField d = delta_exponent(1.5, r);
    CHECK(d({0.5, 0.0}) == doctest::Approx(1.0 / 1.5 - 1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(delta_exponent(1.0, r), std::domain_error);  // gamma > 1 fails
    CHECK_THROWS_AS(delta_exponent(3.5, r), std::domain_error);  // gamma <= r^- fails

    // In 2-d the upper constraint r^+ < n gamma / (n - gamma) activates.
    const Box box2{2, {0.0, 0.0}, 0.5};
    const ExponentField r2 = ExponentField::constant(box2, 10.0);
    CHECK_THROWS_AS(delta_exponent(1.5, r2), std::domain_error); // 10 >= 2*1.5/0.5 = 6
    CHECK_NOTHROW(delta_exponent(1.5, ExponentField::constant(box2, 5.0)));
}

TEST_CASE("regularity estimates vanish for constants and scale with jumps") {
    const ExponentField flat = ExponentField::constant(unit_box(), 2.0);
    const RegularityReport r0 = estimate_regularity(flat, 5000, 42);
    CHECK(r0.local_logholder_constant == 0.0);
    CHECK(r0.loglog_constant == 0.0);
    CHECK(r0.pair_count >= 5000);

    const Grid g{unit_box(), 1};
    const ExponentField small = ExponentField::tabulated(g, {2.0, 2.2});
    const ExponentField large = ExponentField::tabulated(g, {2.0, 3.0});
    const RegularityReport rs = estimate_regularity(small, 5000, 42);
    const RegularityReport rl = estimate_regularity(large, 5000, 42);
    CHECK(rs.loglog_constant > 0.0);
    // Same sampled pairs, pointwise 5x the jump: the maxima scale exactly.
    CHECK(rl.loglog_constant == doctest::Approx(5.0 * rs.loglog_constant).epsilon(1e-12));

    const RegularityReport again = estimate_regularity(large, 5000, 42);
    CHECK(again.loglog_constant == rl.loglog_constant);
    CHECK(again.local_logholder_constant == rl.local_logholder_constant);
}

TEST_CASE("extremes over subregions come from contained samples") {
    const ExponentField p = ExponentField::affine(unit_box(), {1.0, 0.0}, 1.0, 1.0, 10.0);
    const Rect left{1, {0.0, 0.0}, {0.5, 0.0}};
    const auto [lo, hi] = p.extremes(left);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.5).epsilon(1e-12));
}
