#pragma once

#include <cstdint>
#include <vector>

#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"

namespace varlex {

// One cube of the indicator-norm formula sweep for the space with integrand
// t^{p(x)} (log(e+t))^{q(x)}.
struct FormulaRow {
    DyadicCube cube;
    double cube_measure = 0.0; // |Q∩box|
    double measured = 0.0;     // Luxemburg norm of chi_Q on a local subgrid
    double predicted = 0.0;    // |Q|^{(1/p)_Q} (log(e+1/|Q|))^{(q/p)_Q}
    double ratio = 0.0;        // measured / predicted
};

struct FormulaTable {
    std::vector<FormulaRow> rows;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    // Least-squares slope of log(ratio) against log|Q|; a genuine two-sided
    // equivalence shows up as a flat fit.
    double log_slope = 0.0;
};

// Sweeps sampled lattice cubes (at most `per_level` per level, evenly spaced
// in index space) and compares the measured indicator norm with the
// prediction. Cube norms and cube averages use a per-cube midpoint subgrid
// with `subdiv` cells per axis, so arbitrarily deep levels stay cheap.
// Requires 1 < p^- and q >= 0.
FormulaTable verify_norm_formula(const ExponentField& p, const ExponentField& q,
                                 const CubeLattice& lattice, int per_level = 8,
                                 int subdiv = 256, double tol = 1e-10, int jobs = 1);

// The supporting estimates behind the formula, each reported as the maximum
// over the same sampled cubes of (left side)/(right side) so that a finite,
// refinement-stable value certifies the inequality with that constant:
//   log_power_osc_bound    max_Q max_{x,y in Q} L^{q(x)-q(y)}, L = log(e+1/|Q|)
//   inverse_average_bound  max_Q inv_{averaged exps}(1/|Q|) / avg_Q inv_{p(x),q(x)}(1/|Q|)
//   two_factor_bound       max_Q t / (avg_Q inv_{p,q}(t) * avg_Q L(t)^q inv_{p',q}(t)), t = 1/|Q|
//   average_vs_norm_bound  max_Q avg_Q |Q|^{1/p(x)} / ||chi_Q||_p
struct LemmaChainReport {
    double log_power_osc_bound = 0.0;
    double inverse_average_bound = 0.0;
    double two_factor_bound = 0.0;
    double average_vs_norm_bound = 0.0;
    bool all_finite() const;
};

LemmaChainReport verify_lemma_chain(const ExponentField& p, const ExponentField& q,
                                    const CubeLattice& lattice, int per_level = 8,
                                    int subdiv = 256, double tol = 1e-10, int jobs = 1);

// The sampled cubes the two sweeps visit, for reuse in reports and tests.
std::vector<DyadicCube> sampled_cubes(const CubeLattice& lattice, int per_level);

// Inverse of t -> t^alpha (log(e+t))^theta at s >= 0 for scalar exponents
// (bisection; closed form when theta = 0).
double power_log_inverse(double alpha, double theta, double s, double tol = 1e-12);

} // namespace varlex
