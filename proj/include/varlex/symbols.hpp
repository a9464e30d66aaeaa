#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"
#include "varlex/norms.hpp"

namespace varlex {

// Cube functional a(Q) controlling the mean oscillation of a symbol. The
// built-in kinds are a ≡ 1 (BMO-type), the power |Q|^{delta/n}, and the
// variable-exponent indicator norm ||chi_Q||_{n/delta(.)}.
class CubeFunctional {
public:
    static CubeFunctional one();
    // |Q|^{delta/n}; requires 0 < delta and dim in {1,2}.
    static CubeFunctional power(int dim, double delta);
    // ||chi_{Q∩box}||_{n/delta(.)} on a local subgrid with `subdiv` cells per
    // axis; requires delta^- > 0 so the exponent n/delta(.) is bounded.
    static CubeFunctional variable_norm(const ExponentField& delta, int subdiv = 64,
                                        double tol = 1e-10);
    static CubeFunctional custom(std::function<double(const Rect&)> fn);

    double operator()(const Rect& rect) const { return fn_(rect); }
    double operator()(const DyadicCube& q) const { return fn_(q.rect); }

private:
    explicit CubeFunctional(std::function<double(const Rect&)> fn);
    std::function<double(const Rect&)> fn_;
};

// Result of a lattice sweep of the normalized-oscillation seminorm
// sup_Q a(Q)^{-1} (avg_Q |b - b_Q|^rho)^{1/rho}.
struct SymbolReport {
    double seminorm = 0.0;
    // Least monotonicity constant of a(.) over nested dyadic pairs Q' ⊂ Q:
    // max a(Q')/a(Q), floored at 1.
    double t_infinity = 1.0;
    DyadicCube worst_cube;
    double rho = 1.0;
    int64_t cube_count = 0;
};

// Sweep all lattice cubes (dyadic, plus shifted copies when present) and
// maximize the normalized oscillation; throws std::domain_error when a(Q)
// vanishes on a cube with grid cells, or when rho < 1.
SymbolReport lipschitz_seminorm(const GridFunction& b, const CubeFunctional& a, double rho,
                                const CubeLattice& lattice, bool include_shifted = true,
                                int jobs = 1);

// (rho-seminorm, 1-seminorm) of the same symbol; the two are comparable with
// constants depending only on the space, and Jensen gives first >= second.
std::pair<double, double> seminorm_equivalence_check(const GridFunction& b,
                                                     const CubeFunctional& a, double rho,
                                                     const CubeLattice& lattice, int jobs = 1);

// ||chi_Q (b - b_Q)^k||_{p(.)} / ||chi_Q||_{p(.)} for integer k >= 1.
double oscillation_norm_ratio(const GridFunction& b, const ExponentField& p, int k,
                              const DyadicCube& q, double tol = 1e-10);

// |b_{3Q∩box} - b_Q|; sets *clipped when 3Q leaves the box.
double nested_average_gap(const GridFunction& b, const DyadicCube& q, bool* clipped = nullptr);

// ||chi_Q |f|^nu||_{p(.)} / ((avg_Q |f|)^nu ||chi_Q||_{p(.)}) for fixed
// 0 < nu < 1; throws when the average vanishes.
double power_average_ratio(const GridFunction& f, const ExponentField& p, double nu,
                           const DyadicCube& q, double tol = 1e-10);

struct PointwiseLipschitzReport {
    // max over sampled pairs of |b(x) - b(z)| / |x - z|^{delta(x)}
    double pair_constant = 0.0;
    // max over dyadic cubes Q and cells z in kQ of |b(z) - b_Q| / ||chi_Q||_{n/delta(.)}
    double cube_constant = 0.0;
    int64_t pair_count = 0;
};

// Samples the two pointwise smoothness constants of a symbol against a
// variable exponent delta(.); both finite is the pass condition.
PointwiseLipschitzReport variable_lipschitz_pointwise_check(
    const GridFunction& b, const ExponentField& delta, int64_t pair_budget,
    const CubeLattice& lattice, int k_dilate = 3, uint64_t seed = 1, double tol = 1e-10);

} // namespace varlex
