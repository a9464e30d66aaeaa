#include "varlex/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varlex/norms.hpp"
#include "varlex/parallel.hpp"

namespace varlex {

namespace {

double int_pow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

void require_pointwise_leq(const ExponentField& p, const ExponentField& q, const char* msg) {
    if (p.p_plus() <= q.p_minus()) return; // separated extremes settle it
    const Box box = p.box();
    // Sample both fields on a dense midpoint set.
    const int depth = box.dim == 1 ? 12 : 7;
    const Grid probe{box, depth};
    for (int64_t i = 0; i < probe.cell_count(); ++i) {
        const Point x = probe.cell_midpoint(i);
        if (p(x) > q(x) + 1e-12) throw std::domain_error(msg);
    }
}

void require_positive_weights(const WeightPair& weights) {
    if (!(weights.v.grid == weights.w.grid)) {
        throw std::invalid_argument("weights: v and w must share a grid");
    }
    for (double x : weights.v.values) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw std::domain_error("weights: v must be positive and finite");
        }
    }
    for (double x : weights.w.values) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw std::domain_error("weights: w must be positive and finite");
        }
    }
}

GridFunction reciprocal(const GridFunction& v) {
    GridFunction out(v.grid, 0.0);
    for (size_t i = 0; i < v.values.size(); ++i) out.values[i] = 1.0 / v.values[i];
    return out;
}

// Shared sweep: per cube, symbol_factor(Q)^m * Ktilde(l(Q)) * embedding *
// v-ratio * w-ratio, with the bump spaces given as integrands.
FPReport functional_sweep(const std::function<double(const DyadicCube&)>& symbol_factor, int m,
                          const Kernel& kernel, const ExponentField& p, const ExponentField& q,
                          const GPhiFunction& v_space, const GPhiFunction& w_space,
                          const WeightPair& weights, const CubeLattice& lattice,
                          bool include_shifted, double tol, int jobs) {
    const Grid& grid = weights.v.grid;
    const GridFunction vinv = reciprocal(weights.v);
    const GPhiFunction phi_p = GPhiFunction::power(p);
    const GPhiFunction phi_q = GPhiFunction::power(q);

    // Local-integrability preconditions: finite norms on the whole box
    // (luxemburg_norm throws on overflow).
    luxemburg_norm(phi_p, weights.v, tol);
    luxemburg_norm(w_space, weights.w, tol);

    const std::vector<DyadicCube> cubes = lattice.cubes(include_shifted);
    std::vector<FPRow> rows(cubes.size());
    std::vector<unsigned char> valid(cubes.size(), 0);
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t i) {
        const DyadicCube& cube = cubes[static_cast<size_t>(i)];
        FPRow row;
        row.cube = cube;
        const double den_p = chi_norm_on_grid(phi_p, grid, cube.rect, tol).value;
        if (den_p <= 0.0) return; // cube below grid resolution
        const double den_q = chi_norm_on_grid(phi_q, grid, cube.rect, tol).value;
        const double den_v = chi_norm_on_grid(v_space, grid, cube.rect, tol).value;
        const double den_w = chi_norm_on_grid(w_space, grid, cube.rect, tol).value;
        row.symbol_factor = m == 0 ? 1.0 : int_pow(symbol_factor(cube), m);
        row.kernel_factor = kernel.ball_integral(cube.side_length());
        row.embedding_factor = den_q / den_p;
        row.v_factor = luxemburg_norm(v_space, vinv, tol, &cube.rect).value / den_v;
        row.w_factor = luxemburg_norm(w_space, weights.w, tol, &cube.rect).value / den_w;
        row.product = row.symbol_factor * row.kernel_factor * row.embedding_factor *
                      row.v_factor * row.w_factor;
        rows[static_cast<size_t>(i)] = row;
        valid[static_cast<size_t>(i)] = 1;
    });

    FPReport report;
    report.rows.reserve(cubes.size());
    bool have = false;
    for (size_t i = 0; i < cubes.size(); ++i) {
        if (!valid[i]) continue;
        report.rows.push_back(rows[i]);
        if (!have || rows[i].product > report.kappa) {
            report.kappa = rows[i].product;
            report.worst_cube = rows[i].cube;
            have = true;
        }
    }
    if (!have) throw std::domain_error("testing condition: no lattice cube contains grid cells");
    return report;
}

} // namespace

FPReport fefferman_phong_thm11(const ExponentField& p, const ExponentField& q, double R,
                               double S, const CubeFunctional& a, int m, const Kernel& kernel,
                               const WeightPair& weights, const CubeLattice& lattice,
                               bool include_shifted, double tol, int jobs) {
    if (m < 0) throw std::invalid_argument("fefferman_phong_thm11: requires m >= 0");
    if (!(p.p_minus() > 1.0)) {
        throw std::domain_error("fefferman_phong_thm11: requires p_minus > 1");
    }
    require_pointwise_leq(p, q, "fefferman_phong_thm11: requires p <= q pointwise");
    const ExponentField p_conj = p.conjugate();
    if (!(R > p_conj.p_plus() / p_conj.p_minus())) {
        throw std::domain_error("fefferman_phong_thm11: requires R > (p')^+ / (p')^-");
    }
    if (!(S > q.p_plus() / q.p_minus())) {
        throw std::domain_error("fefferman_phong_thm11: requires S > q^+ / q^-");
    }
    require_positive_weights(weights);
    const GPhiFunction v_space = GPhiFunction::power(p_conj.scaled(R));
    const GPhiFunction w_space = GPhiFunction::power(q.scaled(S));
    return functional_sweep([&a](const DyadicCube& cube) { return a(cube); }, m, kernel, p, q,
                            v_space, w_space, weights, lattice, include_shifted, tol, jobs);
}

FPReport fefferman_phong_thm12(const ExponentField& p, const ExponentField& q,
                               const ExponentField& delta, int m, const Kernel& kernel,
                               const GPhiFunction& A, const GPhiFunction& E,
                               const WeightPair& weights, const CubeLattice& lattice,
                               bool include_shifted, double tol, int jobs) {
    if (m < 0) throw std::invalid_argument("fefferman_phong_thm12: requires m >= 0");
    require_pointwise_leq(p, q, "fefferman_phong_thm12: requires p <= q pointwise");
    require_positive_weights(weights);
    const Grid& grid = weights.v.grid;
    if (m == 0) {
        return functional_sweep([](const DyadicCube&) { return 1.0; }, 0, kernel, p, q, A, E,
                                weights, lattice, include_shifted, tol, jobs);
    }
    if (!(delta.p_minus() > 0.0)) {
        throw std::domain_error("fefferman_phong_thm12: m >= 1 requires delta^- > 0");
    }
    const GPhiFunction phi_nd =
        GPhiFunction::power(delta.reciprocal_scaled(static_cast<double>(grid.box.dim)));
    auto symbol_factor = [&phi_nd, &grid, tol](const DyadicCube& cube) {
        return chi_norm_on_grid(phi_nd, grid, cube.rect, tol).value;
    };
    return functional_sweep(symbol_factor, m, kernel, p, q, A, E, weights, lattice,
                            include_shifted, tol, jobs);
}

bool ConditionFReport::all_finite() const {
    return std::isfinite(product_norm_bound) && std::isfinite(inverse_product_bound) &&
           std::isfinite(conjugate_product_bound);
}

ConditionFReport check_condition_F(const PhiTriple& triple, const Grid& grid,
                                   const CubeLattice& lattice, const std::vector<double>& t_samples,
                                   int x_samples, int subdiv, double tol, int jobs) {
    if (t_samples.empty()) {
        throw std::invalid_argument("check_condition_F: requires at least one t sample");
    }
    for (double t : t_samples) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw std::domain_error("check_condition_F: t samples must be positive and finite");
        }
    }
    if (x_samples < 1) throw std::invalid_argument("check_condition_F: requires x_samples >= 1");

    const Box& box = grid.box;
    const ConjugationGrid cgrid = ConjugationGrid::geometric();
    const std::vector<DyadicCube> cubes = lattice.cubes(true);

    ConditionFReport report;

    // (i) and (iii): cube-norm products on local subgrids.
    std::vector<double> bound_i(cubes.size(), 0.0);
    std::vector<double> bound_iii(cubes.size(), 0.0);
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t ci) {
        const Rect r = cubes[static_cast<size_t>(ci)].rect;
        const Rect clipped = r.intersect(box.rect());
        if (clipped.empty() || clipped.measure() <= 0.0) return;
        const double na = chi_norm(triple.A, box, r, subdiv, tol).value;
        const double nb = chi_norm(triple.B, box, r, subdiv, tol).value;
        const double nd = chi_norm(triple.D, box, r, subdiv, tol).value;
        if (nd > 0.0) bound_i[static_cast<size_t>(ci)] = na * nb / nd;
        const double nd_conj = conjugate_chi_norm(triple.D, cgrid, box, r, subdiv, tol).value;
        bound_iii[static_cast<size_t>(ci)] = nd * nd_conj / clipped.measure();
    });
    for (size_t i = 0; i < cubes.size(); ++i) {
        report.product_norm_bound = std::max(report.product_norm_bound, bound_i[i]);
        report.conjugate_product_bound = std::max(report.conjugate_product_bound, bound_iii[i]);
    }

    // (ii): inverse products on an x-stride times the caller's t values.
    const int64_t cells = grid.cell_count();
    const int64_t stride = std::max<int64_t>(1, cells / x_samples);
    for (int64_t i = 0; i < cells; i += stride) {
        const Point x = grid.cell_midpoint(i);
        for (double t : t_samples) {
            const double ia = triple.A.inverse(x, t);
            const double ib = triple.B.inverse(x, t);
            const double id = triple.D.inverse(x, t);
            if (id > 0.0) {
                report.inverse_product_bound =
                    std::max(report.inverse_product_bound, ia * ib / id);
            }
        }
    }
    return report;
}

GridFunction power_weight(const Grid& grid, double exponent, const Point& center) {
    GridFunction out(grid, 0.0);
    for (int64_t i = 0; i < grid.cell_count(); ++i) {
        const Point x = grid.cell_midpoint(i);
        const double dx = x[0] - center[0];
        const double dy = grid.box.dim == 2 ? x[1] - center[1] : 0.0;
        const double r = std::sqrt(dx * dx + dy * dy);
        if (r == 0.0 && exponent <= 0.0) {
            throw std::domain_error("power_weight: center coincides with a cell midpoint");
        }
        out.values[static_cast<size_t>(i)] = std::pow(r, exponent);
    }
    return out;
}

} // namespace varlex
