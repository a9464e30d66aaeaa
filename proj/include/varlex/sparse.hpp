#pragma once

#include <cstdint>
#include <vector>

#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"
#include "varlex/kernels.hpp"

namespace varlex {

// Dyadic pointwise majorant of the order-m commutator:
//   M(x) = sum_Q kbar(l(Q)/2) sum_{j=0..m} C(m,j) |b(x)-b_Q|^{m-j} chi_Q(x)
//                          * integral_{3Q∩box} |b-b_Q|^j f
// summed over all dyadic lattice cubes.
struct MajorantResult {
    GridFunction value;
    // Per-cell quadrature slack: the self-cell mass f(x)*Ktilde(r_cell)
    // (m = 0 only; zero otherwise). The pointwise domination of the
    // commutator holds against value + self_term.
    GridFunction self_term;
    // Some 3Q with f-mass inside the box extends past the box, so continuum
    // mass outside the domain is missing from the sums.
    bool clipped_mass_warning = false;
};

// Requires f >= 0 on the same grid as b and lattice j_max equal to the grid
// depth (so the deepest cubes are single cells and every midpoint pair is
// covered by some cube level).
MajorantResult dyadic_majorant(const Kernel& kernel, const GridFunction& b, int m,
                               const GridFunction& f, const CubeLattice& lattice, int jobs = 1);

// One selected (maximal) cube of a stopping family.
struct StoppingEntry {
    DyadicCube cube;
    double g_value = 0.0;
    // |Q ∩ D_{k+1}| where D_{k+1} is the union of the next level's cubes.
    double intersection_measure = 0.0;
    // |Q| - intersection_measure (measure of the residual set).
    double residual_measure = 0.0;
};

// Calderon-Zygmund stopping family for a nonnegative cube functional G:
// at threshold index k the selected cubes are the inclusion-maximal lattice
// cubes with G(Q) > alpha^k. Thresholds run over k_lo..k_hi where k_hi is
// the largest class index present and k_lo is the largest class index of a
// lattice root (smaller k would re-select the same roots indefinitely).
struct StoppingFamily {
    double alpha = 0.0;
    int k_lo = 0;
    int k_hi = -1; // empty family when k_hi < k_lo
    std::vector<std::vector<StoppingEntry>> levels; // levels[k - k_lo]
    // Measured packing constant: strict upper envelope of
    // alpha * |Q ∩ D_{k+1}| / |Q| over all selected cubes.
    double packing_constant = 0.0;
    bool packing_ok = false; // packing_constant < alpha
    int64_t positive_count = 0; // dyadic cubes with G > 0

    int level_count() const { return k_hi < k_lo ? 0 : k_hi - k_lo + 1; }
    const std::vector<StoppingEntry>& at(int k) const { return levels[k - k_lo]; }
};

// Class index of a value G > 0: the unique k with alpha^k < G <= alpha^(k+1),
// computed by logarithm and snapped so the sandwich holds in double precision.
int stopping_class(double g, double alpha);

// g_values are indexed by the dyadic enumeration order of lattice.cubes(false).
// Throws unless alpha > 1 and every G value is finite and >= 0.
StoppingFamily build_stopping_family(const std::vector<double>& g_values, double alpha,
                                     const CubeLattice& lattice);

// Norm ratio G(Q) = ||chi_Q gw||_tau / ||chi_Q||_tau for every dyadic lattice
// cube, in enumeration order (0 where Q holds no grid cells).
std::vector<double> norm_ratio_values(const ExponentField& tau, const GridFunction& gw,
                                      const CubeLattice& lattice, double tol = 1e-10,
                                      int jobs = 1);

// Both sides of the localized kernel-tail bound on a cube Q0:
//   lhs = sum_{Q subset Q0} kbar(l(Q)/2) |3Q| |Q| ||chi_{3Q} f||_w / ||chi_{3Q}||_w
//   rhs =   Ktilde(delta(1+eps) l(Q0)) |3Q0|   ||chi_{3Q0} f||_w / ||chi_{3Q0}||_w
// with |3Q| the continuum dilate measure and norms over 3Q∩box.
struct LocalSumReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool clipped = false;
    // lhs/rhs, 0 when both vanish; infinity when only rhs vanishes.
    double ratio() const;
};

LocalSumReport local_sum_bound_check(const Kernel& kernel, const GridFunction& f,
                                     const ExponentField& omega, const DyadicCube& q0,
                                     const CubeLattice& lattice, double delta = 1.0,
                                     double eps = 1.0, double tol = 1e-10, int jobs = 1);

// sum_{Q in family} ||chi_Q f||_p ||chi_Q g||_{p'} / (||f||_p ||g||_{p'})
// for pairwise disjoint cubes; the sum-to-product ratio is bounded by a
// constant of the space.
double disjoint_sum_ratio(const ExponentField& p, const GridFunction& f, const GridFunction& g,
                          const std::vector<DyadicCube>& family, double tol = 1e-10);

// Fixed-depth overlapping variant: cubes Q ⊆ Q0 at depth d below Q0, terms
// ||f chi_{3Q}||_p ||g chi_{3Q}||_{p'}, normalized by the Q0 term. Bounded
// uniformly in d.
double overlapping_sum_ratio(const ExponentField& p, const GridFunction& f,
                             const GridFunction& g, const DyadicCube& q0, int depth,
                             const CubeLattice& lattice, double tol = 1e-10);

} // namespace varlex
