#include "varlex/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varlex/gphi.hpp"
#include "varlex/parallel.hpp"
#include "varlex/random_fields.hpp"

namespace varlex {

namespace {

double mean_oscillation(const GridFunction& b, const Rect& rect, double rho, bool* any_cells) {
    int64_t count = 0;
    double mean = 0.0;
    b.grid.for_cells_in(rect, [&](int64_t i, const Point&) {
        mean += b.values[static_cast<size_t>(i)];
        ++count;
    });
    if (any_cells) *any_cells = count > 0;
    if (count == 0) return 0.0;
    mean /= static_cast<double>(count);
    double acc = 0.0;
    b.grid.for_cells_in(rect, [&](int64_t i, const Point&) {
        const double d = std::abs(b.values[static_cast<size_t>(i)] - mean);
        acc += rho == 1.0 ? d : std::pow(d, rho);
    });
    acc /= static_cast<double>(count);
    return rho == 1.0 ? acc : std::pow(acc, 1.0 / rho);
}

} // namespace

CubeFunctional::CubeFunctional(std::function<double(const Rect&)> fn) : fn_(std::move(fn)) {}

CubeFunctional CubeFunctional::one() {
    return CubeFunctional([](const Rect&) { return 1.0; });
}

CubeFunctional CubeFunctional::power(int dim, double delta) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("CubeFunctional::power: dim must be 1 or 2");
    if (!(delta > 0.0)) throw std::domain_error("CubeFunctional::power: requires delta > 0");
    const double e = delta / static_cast<double>(dim);
    return CubeFunctional([e](const Rect& r) { return std::pow(r.measure(), e); });
}

CubeFunctional CubeFunctional::variable_norm(const ExponentField& delta, int subdiv, double tol) {
    if (subdiv < 1) throw std::invalid_argument("CubeFunctional::variable_norm: requires subdiv >= 1");
    const Box box = delta.box();
    const double n = static_cast<double>(box.dim);
    // Throws unless delta^- > 0, which keeps n/delta(.) bounded.
    const GPhiFunction phi = GPhiFunction::power(delta.reciprocal_scaled(n));
    return CubeFunctional([phi, box, subdiv, tol](const Rect& r) {
        return chi_norm(phi, box, r, subdiv, tol).value;
    });
}

CubeFunctional CubeFunctional::custom(std::function<double(const Rect&)> fn) {
    if (!fn) throw std::invalid_argument("CubeFunctional::custom: empty function");
    return CubeFunctional(std::move(fn));
}

SymbolReport lipschitz_seminorm(const GridFunction& b, const CubeFunctional& a, double rho,
                                const CubeLattice& lattice, bool include_shifted, int jobs) {
    if (!(rho >= 1.0)) throw std::domain_error("lipschitz_seminorm: requires rho >= 1");
    if (b.grid.box.dim != lattice.box().dim) {
        throw std::invalid_argument("lipschitz_seminorm: grid and lattice dimensions differ");
    }
    const std::vector<DyadicCube> cubes = lattice.cubes(include_shifted);
    const int64_t dyadic = lattice.dyadic_count();

    std::vector<double> ratio(cubes.size(), -1.0); // -1 marks cubes without grid cells
    std::vector<double> avalue(cubes.size(), 0.0);
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t i) {
        const DyadicCube& q = cubes[static_cast<size_t>(i)];
        bool any = false;
        const double osc = mean_oscillation(b, q.rect, rho, &any);
        const double aq = a(q.rect);
        avalue[static_cast<size_t>(i)] = aq;
        if (!any) return;
        if (!(aq > 0.0)) {
            throw std::domain_error(
                "lipschitz_seminorm: cube functional vanishes on a cube with grid cells");
        }
        ratio[static_cast<size_t>(i)] = osc / aq;
    });

    SymbolReport report;
    report.rho = rho;
    report.cube_count = static_cast<int64_t>(cubes.size());
    report.seminorm = 0.0;
    bool have_worst = false;
    for (size_t i = 0; i < cubes.size(); ++i) {
        if (ratio[i] < 0.0) continue;
        if (!have_worst || ratio[i] > report.seminorm) {
            report.seminorm = ratio[i];
            report.worst_cube = cubes[i];
            have_worst = true;
        }
    }

    // t_infinity over nested dyadic pairs: max a(descendant)/a(ancestor),
    // evaluated with one running minimum over each ancestor chain.
    report.t_infinity = 1.0;
    std::vector<double> min_on_chain(static_cast<size_t>(dyadic),
                                     std::numeric_limits<double>::infinity());
    for (int64_t i = 0; i < dyadic; ++i) {
        const DyadicCube& q = cubes[static_cast<size_t>(i)];
        const std::optional<DyadicCube> up = lattice.parent(q);
        if (!up) continue;
        const int64_t pi = lattice.position(*up);
        min_on_chain[static_cast<size_t>(i)] =
            std::min(avalue[static_cast<size_t>(pi)], min_on_chain[static_cast<size_t>(pi)]);
        if (min_on_chain[static_cast<size_t>(i)] > 0.0) {
            report.t_infinity = std::max(
                report.t_infinity,
                avalue[static_cast<size_t>(i)] / min_on_chain[static_cast<size_t>(i)]);
        }
    }
    return report;
}

std::pair<double, double> seminorm_equivalence_check(const GridFunction& b,
                                                     const CubeFunctional& a, double rho,
                                                     const CubeLattice& lattice, int jobs) {
    const SymbolReport at_rho = lipschitz_seminorm(b, a, rho, lattice, true, jobs);
    const SymbolReport at_one = lipschitz_seminorm(b, a, 1.0, lattice, true, jobs);
    return {at_rho.seminorm, at_one.seminorm};
}

double oscillation_norm_ratio(const GridFunction& b, const ExponentField& p, int k,
                              const DyadicCube& q, double tol) {
    if (k < 1) throw std::invalid_argument("oscillation_norm_ratio: requires k >= 1");
    if (!(p.p_minus() > 1.0)) {
        throw std::domain_error("oscillation_norm_ratio: requires p_minus > 1");
    }
    const double bq = average(b, q);
    GridFunction g(b.grid, 0.0);
    b.grid.for_cells_in(q.rect, [&](int64_t i, const Point&) {
        const double d = std::abs(b.values[static_cast<size_t>(i)] - bq);
        g.values[static_cast<size_t>(i)] = k == 1 ? d : std::pow(d, static_cast<double>(k));
    });
    return cube_norm_ratio(GPhiFunction::power(p), g, q, tol);
}

double nested_average_gap(const GridFunction& b, const DyadicCube& q, bool* clipped) {
    const Rect box_rect = b.grid.box.rect();
    const Rect three = q.rect.scaled(3.0);
    if (clipped) *clipped = !box_rect.contains_rect(three);
    return std::abs(average(b, three.intersect(box_rect)) - average(b, q));
}

double power_average_ratio(const GridFunction& f, const ExponentField& p, double nu,
                           const DyadicCube& q, double tol) {
    if (!(nu > 0.0 && nu < 1.0)) {
        throw std::domain_error("power_average_ratio: requires 0 < nu < 1");
    }
    GridFunction absf(f.grid, 0.0);
    for (size_t i = 0; i < f.values.size(); ++i) absf.values[i] = std::abs(f.values[i]);
    const double fq = average(absf, q);
    if (!(fq > 0.0)) throw std::domain_error("power_average_ratio: requires a nonzero average on Q");
    GridFunction g(f.grid, 0.0);
    f.grid.for_cells_in(q.rect, [&](int64_t i, const Point&) {
        g.values[static_cast<size_t>(i)] = std::pow(absf.values[static_cast<size_t>(i)], nu);
    });
    return cube_norm_ratio(GPhiFunction::power(p), g, q, tol) / std::pow(fq, nu);
}

PointwiseLipschitzReport variable_lipschitz_pointwise_check(
    const GridFunction& b, const ExponentField& delta, int64_t pair_budget,
    const CubeLattice& lattice, int k_dilate, uint64_t seed, double tol) {
    if (pair_budget < 1) {
        throw std::invalid_argument("variable_lipschitz_pointwise_check: requires pair_budget >= 1");
    }
    if (k_dilate < 1) {
        throw std::invalid_argument("variable_lipschitz_pointwise_check: requires k_dilate >= 1");
    }
    PointwiseLipschitzReport report;
    const Grid& grid = b.grid;
    const int64_t cells = grid.cell_count();

    // Pair constant: half the budget on a cell and an axis neighbor, half on
    // independent random cells, all drawn from one deterministic stream.
    uint64_t state = seed;
    for (int64_t s = 0; s < pair_budget; ++s) {
        const int64_t i = uniform_index(state, cells);
        int64_t j;
        if (s % 2 == 0) {
            j = i + 1 < cells ? i + 1 : i - 1;
        } else {
            j = uniform_index(state, cells);
        }
        if (i == j) continue;
        const Point x = grid.cell_midpoint(i);
        const Point z = grid.cell_midpoint(j);
        const double dx = x[0] - z[0];
        const double dy = grid.box.dim == 2 ? x[1] - z[1] : 0.0;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist == 0.0) continue;
        const double gap = std::abs(b.values[static_cast<size_t>(i)] - b.values[static_cast<size_t>(j)]);
        report.pair_constant =
            std::max(report.pair_constant, gap / std::pow(dist, delta(x)));
        ++report.pair_count;
    }

    // Cube constant against the indicator norm ||chi_Q||_{n/delta(.)}.
    const CubeFunctional a = CubeFunctional::variable_norm(delta, 64, tol);
    const Rect box_rect = grid.box.rect();
    for (const DyadicCube& q : lattice.cubes(false)) {
        double bq;
        try {
            bq = average(b, q);
        } catch (const std::domain_error&) {
            continue; // cube below grid resolution
        }
        const double aq = a(q.rect);
        if (!(aq > 0.0)) continue;
        double worst = 0.0;
        grid.for_cells_in(q.rect.scaled(static_cast<double>(k_dilate)).intersect(box_rect),
                          [&](int64_t i, const Point&) {
                              worst = std::max(
                                  worst, std::abs(b.values[static_cast<size_t>(i)] - bq));
                          });
        report.cube_constant = std::max(report.cube_constant, worst / aq);
    }
    return report;
}

} // namespace varlex
