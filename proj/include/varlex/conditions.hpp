#pragma once

#include <cstdint>
#include <vector>

#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"
#include "varlex/gphi.hpp"
#include "varlex/kernels.hpp"
#include "varlex/symbols.hpp"

namespace varlex {

// Two-weight pair (v, w): the source space is weighted by v, the target by w.
struct WeightPair {
    GridFunction v;
    GridFunction w;
};

// One cube's worth of the testing-condition functional, factor by factor.
struct FPRow {
    DyadicCube cube;
    double symbol_factor = 1.0;    // a(Q)^m resp. ||chi_Q||_{n/delta(.)}^m
    double kernel_factor = 0.0;    // Ktilde(l(Q))
    double embedding_factor = 0.0; // ||chi_Q||_q / ||chi_Q||_p
    double v_factor = 0.0;         // ||chi_Q v^-1|| / ||chi_Q|| in the v-space
    double w_factor = 0.0;         // ||chi_Q w|| / ||chi_Q|| in the w-space
    double product = 0.0;
};

struct FPReport {
    double kappa = 0.0; // max product over tested cubes (lower bound for the sup)
    DyadicCube worst_cube;
    std::vector<FPRow> rows; // lattice enumeration order
};

// Certifier for the power-bump testing condition: per cube,
//   a(Q)^m Ktilde(l(Q)) (||chi_Q||_q / ||chi_Q||_p)
//     * (||chi_Q v^-1||_{Rp'} / ||chi_Q||_{Rp'})
//     * (||chi_Q w||_{Sq}   / ||chi_Q||_{Sq}).
// Preconditions: 1 < p^-, p <= q pointwise, R > (p')^+/(p')^-, S > q^+/q^-,
// weights positive and finite with ||v||_p and ||w||_{Sq} finite on the box.
FPReport fefferman_phong_thm11(const ExponentField& p, const ExponentField& q, double R,
                               double S, const CubeFunctional& a, int m, const Kernel& kernel,
                               const WeightPair& weights, const CubeLattice& lattice,
                               bool include_shifted = true, double tol = 1e-10, int jobs = 1);

// Certifier for the Musielak-Orlicz-bump testing condition: per cube,
//   ||chi_Q||_{n/delta(.)}^m Ktilde(l(Q)) (||chi_Q||_q / ||chi_Q||_p)
//     * (||chi_Q v^-1||_A / ||chi_Q||_A) * (||chi_Q w||_E / ||chi_Q||_E).
// m >= 1 requires delta^- > 0; m = 0 never evaluates delta.
FPReport fefferman_phong_thm12(const ExponentField& p, const ExponentField& q,
                               const ExponentField& delta, int m, const Kernel& kernel,
                               const GPhiFunction& A, const GPhiFunction& E,
                               const WeightPair& weights, const CubeLattice& lattice,
                               bool include_shifted = true, double tol = 1e-10, int jobs = 1);

// The three compatibility bounds of a (A, B, D) triple:
//   product_norm_bound      max_Q ||chi_Q||_A ||chi_Q||_B / ||chi_Q||_D
//   inverse_product_bound   max_{x,t} A^-1(x,t) B^-1(x,t) / D^-1(x,t)
//   conjugate_product_bound max_Q ||chi_Q||_D ||chi_Q||_{D*} / |Q|
// All three finite (and stable under refinement) is the pass condition.
struct ConditionFReport {
    double product_norm_bound = 0.0;
    double inverse_product_bound = 0.0;
    double conjugate_product_bound = 0.0;
    bool all_finite() const;
};

// Cube norms are evaluated on per-cube local subgrids with `subdiv` cells per
// axis; item (ii) is sampled at `x_samples` midpoints crossed with the given
// t values.
ConditionFReport check_condition_F(const PhiTriple& triple, const Grid& grid,
                                   const CubeLattice& lattice, const std::vector<double>& t_samples,
                                   int x_samples = 32, int subdiv = 64, double tol = 1e-10,
                                   int jobs = 1);

// Built-in radial power weight |x - center|^exponent sampled at cell
// midpoints; throws when a midpoint hits the center with exponent <= 0.
GridFunction power_weight(const Grid& grid, double exponent, const Point& center = {0.0, 0.0});

} // namespace varlex
