#pragma once

#include <optional>

#include "varlex/geometry.hpp"
#include "varlex/gphi.hpp"

namespace varlex {

// Result of a Luxemburg-norm computation.
//   value:            the norm approximation (inf of admissible lambda)
//   modular_at_value: modular of f/value, within [1-tol, 1+tol] for f != 0
//   iterations:       bisection steps taken (0 for closed-form paths)
//   bracket:          final [lo, hi] enclosing the norm
struct NormResult {
    double value = 0.0;
    double modular_at_value = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Modular rho(f/lambda) = integral of phi(x, |f(x)|/lambda) over region∩box
// (whole box when region is null), midpoint quadrature. Returns +infinity
// when the sum overflows; throws std::domain_error on non-finite samples.
double modular(const GPhiFunction& phi, const GridFunction& f,
               const Rect* region = nullptr, double lambda = 1.0);

// Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} by bisection on the
// nonincreasing map lambda -> rho(f/lambda). Terminates when the modular is
// within tol of 1 (or the bracket collapses); f = 0 returns 0. Constant
// pure-power integrands use the exact closed form.
NormResult luxemburg_norm(const GPhiFunction& phi, const GridFunction& f,
                          double tol = 1e-10, const Rect* region = nullptr);

// Norm of the indicator of region∩box on a local midpoint subgrid with
// `subdiv` cells per axis (independent of any global grid).
NormResult chi_norm(const GPhiFunction& phi, const Box& box, const Rect& region,
                    int subdiv, double tol = 1e-10);

// Norm of the indicator of region∩box using the cells of `grid` (the same
// quadrature cells a GridFunction on that grid would use).
NormResult chi_norm_on_grid(const GPhiFunction& phi, const Grid& grid, const Rect& region,
                            double tol = 1e-10);

// || f w ||_{p(.)} for a positive weight w on the same grid.
NormResult weighted_norm(const ExponentField& p, const GridFunction& f,
                         const GridFunction& w, double tol = 1e-10);

// || chi_Q f ||_phi / || chi_Q ||_phi, both over the cells of f's grid in Q.
double cube_norm_ratio(const GPhiFunction& phi, const GridFunction& f,
                       const DyadicCube& q, double tol = 1e-10);

// ===== conjugate-space norms (integrand = grid-sup conjugate of phi) =====

double conjugate_modular(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                         const GridFunction& g, const Rect* region = nullptr,
                         double lambda = 1.0);

NormResult conjugate_norm(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                          const GridFunction& g, double tol = 1e-10,
                          const Rect* region = nullptr);

NormResult conjugate_chi_norm(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                              const Box& box, const Rect& region, int subdiv,
                              double tol = 1e-10);

} // namespace varlex
