#pragma once

#include <optional>
#include <vector>

#include "varlex/geometry.hpp"
#include "varlex/gphi.hpp"
#include "varlex/norms.hpp"

namespace varlex {

// Norm-average maximal operator over the truncated cube family:
//   M f(x) = sup_{Q : x in Q} w(Q) * ||chi_Q f||_phi / ||chi_Q||_phi
// where w(Q) = ||chi_Q||_beta when a fractional exponent field beta is set,
// else 1. phi = identity gives the plain Hardy-Littlewood averages.
struct MaximalSpec {
    GPhiFunction phi;
    std::optional<ExponentField> beta;
    bool include_shifted = false;
    double tol = 1e-10;
};

// f-independent per-cube factors (denominator norms, fractional weights),
// computed once per (spec, lattice, grid). Immutable afterwards, safe to
// share across threads.
class PreparedMaximal {
public:
    PreparedMaximal(const MaximalSpec& spec, const CubeLattice& lattice, const Grid& grid,
                    int jobs = 1);

    // Evaluates M f at every grid midpoint. Throws if f lives on another grid.
    GridFunction apply(const GridFunction& f, int jobs = 1) const;

    const std::vector<DyadicCube>& cubes() const { return cubes_; }

private:
    MaximalSpec spec_;
    Grid grid_;
    std::vector<DyadicCube> cubes_;
    std::vector<double> inv_denominator_; // w(Q) / ||chi_Q||_phi
};

GridFunction maximal_function(const MaximalSpec& spec, const CubeLattice& lattice,
                              const GridFunction& f, int jobs = 1);

// Monte-Carlo operator-norm probe: max over random nonnegative test
// functions of ||M f||_target / ||f||_source. Reported as a lower bound for
// the true operator norm; deterministic in (seed, trials).
double boundedness_probe(const MaximalSpec& spec, const CubeLattice& lattice, const Grid& grid,
                         const ExponentField& source, const ExponentField& target,
                         int trials, uint64_t seed, int jobs = 1);

} // namespace varlex
