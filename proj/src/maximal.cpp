#include "varlex/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varlex/parallel.hpp"
#include "varlex/random_fields.hpp"

namespace varlex {

namespace {

// ||chi_Q f||_phi over the grid cells of Q, with closed forms for identity
// and constant pure-power integrands.
double restricted_norm(const GPhiFunction& phi, const GridFunction& f, const Rect& rect,
                       double tol) {
    if (phi.constant_power()) {
        const double p = phi.alpha().p_minus();
        double sum = 0.0;
        f.grid.for_cells_in(rect, [&](int64_t i, const Point&) {
            const double v = std::abs(f.values[static_cast<size_t>(i)]);
            if (v != 0.0) sum += p == 1.0 ? v : std::pow(v, p);
        });
        sum *= f.grid.cell_measure();
        return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
    }
    return luxemburg_norm(phi, f, tol, &rect).value;
}

} // namespace

PreparedMaximal::PreparedMaximal(const MaximalSpec& spec, const CubeLattice& lattice,
                                 const Grid& grid, int jobs)
    : spec_(spec), grid_(grid), cubes_(lattice.cubes(spec.include_shifted)) {
    if (grid.box.dim != lattice.box().dim) {
        throw std::invalid_argument("PreparedMaximal: grid and lattice dimensions differ");
    }
    inv_denominator_.assign(cubes_.size(), 0.0);
    parallel_for(static_cast<int64_t>(cubes_.size()), jobs, [&](int64_t i) {
        const DyadicCube& q = cubes_[static_cast<size_t>(i)];
        const double den = chi_norm_on_grid(spec_.phi, grid_, q.rect, spec_.tol).value;
        if (den <= 0.0) {
            inv_denominator_[static_cast<size_t>(i)] = 0.0; // cube holds no grid cells
            return;
        }
        double w = 1.0;
        if (spec_.beta.has_value()) {
            w = chi_norm_on_grid(GPhiFunction::power(*spec_.beta), grid_, q.rect, spec_.tol).value;
        }
        inv_denominator_[static_cast<size_t>(i)] = w / den;
    });
}

GridFunction PreparedMaximal::apply(const GridFunction& f, int jobs) const {
    if (!(f.grid == grid_)) throw std::invalid_argument("PreparedMaximal::apply: grid mismatch");
    GridFunction out(grid_, 0.0);
    // Per-cube numerators, then a cube -> cells max-scatter. The scatter is
    // sequential to keep writes race-free; cube norms dominate the cost.
    std::vector<double> value(cubes_.size(), 0.0);
    parallel_for(static_cast<int64_t>(cubes_.size()), jobs, [&](int64_t i) {
        if (inv_denominator_[static_cast<size_t>(i)] == 0.0) return;
        const double num = restricted_norm(spec_.phi, f, cubes_[static_cast<size_t>(i)].rect, spec_.tol);
        value[static_cast<size_t>(i)] = num * inv_denominator_[static_cast<size_t>(i)];
    });
    for (size_t qi = 0; qi < cubes_.size(); ++qi) {
        const double v = value[qi];
        if (v <= 0.0) continue;
        grid_.for_cells_in(cubes_[qi].rect, [&](int64_t i, const Point&) {
            double& slot = out.values[static_cast<size_t>(i)];
            if (v > slot) slot = v;
        });
    }
    return out;
}

GridFunction maximal_function(const MaximalSpec& spec, const CubeLattice& lattice,
                              const GridFunction& f, int jobs) {
    return PreparedMaximal(spec, lattice, f.grid, jobs).apply(f, jobs);
}

double boundedness_probe(const MaximalSpec& spec, const CubeLattice& lattice, const Grid& grid,
                         const ExponentField& source, const ExponentField& target,
                         int trials, uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("boundedness_probe: requires trials >= 1");
    const PreparedMaximal prepared(spec, lattice, grid, jobs);
    const GPhiFunction phi_source = GPhiFunction::power(source);
    const GPhiFunction phi_target = GPhiFunction::power(target);
    std::vector<double> ratios(static_cast<size_t>(trials), 0.0);
    for (int t = 0; t < trials; ++t) {
        const GridFunction f =
            random_test_function(grid, lattice, splitmix64(seed + static_cast<uint64_t>(t)));
        const double src = luxemburg_norm(phi_source, f).value;
        if (src <= 0.0) continue;
        const GridFunction mf = prepared.apply(f, jobs);
        ratios[static_cast<size_t>(t)] = luxemburg_norm(phi_target, mf).value / src;
    }
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, r);
    return worst;
}

} // namespace varlex
