#include "varlex/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varlex/gphi.hpp"
#include "varlex/norms.hpp"
#include "varlex/parallel.hpp"

namespace varlex {

namespace {

double binomial(int m, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * static_cast<double>(m - j + i) / static_cast<double>(i);
    return c;
}

double int_pow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace

MajorantResult dyadic_majorant(const Kernel& kernel, const GridFunction& b, int m,
                               const GridFunction& f, const CubeLattice& lattice, int jobs) {
    if (!(b.grid == f.grid)) throw std::invalid_argument("dyadic_majorant: b and f must share a grid");
    if (m < 0) throw std::invalid_argument("dyadic_majorant: requires m >= 0");
    if (kernel.dim() != f.grid.box.dim || lattice.box().dim != f.grid.box.dim) {
        throw std::invalid_argument("dyadic_majorant: dimension mismatch");
    }
    if (lattice.j_max() != f.grid.depth) {
        // Pointwise domination needs the deepest cubes to be single cells so
        // every midpoint pair of the quadrature is separated by some cube.
        throw std::invalid_argument("dyadic_majorant: lattice j_max must equal the grid depth");
    }
    if (!b.all_finite() || !f.all_finite()) {
        throw std::domain_error("dyadic_majorant: non-finite samples");
    }
    for (double v : f.values) {
        if (v < 0.0) throw std::domain_error("dyadic_majorant: requires f >= 0");
    }

    const Grid& grid = f.grid;
    const double meas = grid.cell_measure();
    const Rect box_rect = grid.box.rect();
    const std::vector<DyadicCube> cubes = lattice.cubes(false);
    const int64_t ncubes = static_cast<int64_t>(cubes.size());

    // Per-cube data: mean of b over Q, kbar(l(Q)/2), moments
    // I_j = integral_{3Q∩box} |b - b_Q|^j f for j = 0..m.
    std::vector<double> mean_b(cubes.size(), 0.0);
    std::vector<double> kbar_half(cubes.size(), 0.0);
    std::vector<double> moments(cubes.size() * static_cast<size_t>(m + 1), 0.0);
    std::vector<unsigned char> has_cells(cubes.size(), 0);
    std::vector<unsigned char> clip_flag(cubes.size(), 0);

    parallel_for(ncubes, jobs, [&](int64_t ci) {
        const DyadicCube& q = cubes[static_cast<size_t>(ci)];
        int64_t count = 0;
        double acc = 0.0;
        grid.for_cells_in(q.rect, [&](int64_t i, const Point&) {
            acc += b.values[static_cast<size_t>(i)];
            ++count;
        });
        if (count == 0) return;
        has_cells[static_cast<size_t>(ci)] = 1;
        const double bq = acc / static_cast<double>(count);
        mean_b[static_cast<size_t>(ci)] = bq;
        kbar_half[static_cast<size_t>(ci)] = kernel.annulus_sup(0.5 * q.side_length());
        double* mom = &moments[static_cast<size_t>(ci) * static_cast<size_t>(m + 1)];
        const Rect three = q.rect.scaled(3.0);
        grid.for_cells_in(three.intersect(box_rect), [&](int64_t i, const Point&) {
            const double fv = f.values[static_cast<size_t>(i)];
            if (fv == 0.0) return;
            const double d = std::abs(b.values[static_cast<size_t>(i)] - bq);
            double pw = fv * meas;
            for (int j = 0; j <= m; ++j) {
                mom[j] += pw;
                pw *= d;
            }
        });
        if (mom[0] > 0.0 && !box_rect.contains_rect(three)) clip_flag[static_cast<size_t>(ci)] = 1;
    });

    MajorantResult out;
    out.value = GridFunction(grid, 0.0);
    out.self_term = GridFunction(grid, 0.0);
    for (unsigned char c : clip_flag) {
        if (c) {
            out.clipped_mass_warning = true;
            break;
        }
    }

    const double self_integral = m == 0 ? kernel.ball_integral(self_cell_radius(grid)) : 0.0;

    parallel_for(grid.cell_count(), jobs, [&](int64_t i) {
        const Point x = grid.cell_midpoint(i);
        const double bx = b.values[static_cast<size_t>(i)];
        double total = 0.0;
        for (int level = lattice.j_min(); level <= lattice.j_max(); ++level) {
            const DyadicCube q = lattice.containing(level, x);
            const int64_t ci = lattice.position(q);
            if (!has_cells[static_cast<size_t>(ci)]) continue;
            const double* mom = &moments[static_cast<size_t>(ci) * static_cast<size_t>(m + 1)];
            const double dbx = std::abs(bx - mean_b[static_cast<size_t>(ci)]);
            double inner = 0.0;
            for (int j = 0; j <= m; ++j) {
                inner += binomial(m, j) * int_pow(dbx, m - j) * mom[j];
            }
            total += kbar_half[static_cast<size_t>(ci)] * inner;
        }
        out.value.values[static_cast<size_t>(i)] = total;
        if (m == 0) {
            out.self_term.values[static_cast<size_t>(i)] =
                f.values[static_cast<size_t>(i)] * self_integral;
        }
    });
    return out;
}

int stopping_class(double g, double alpha) {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::domain_error("stopping_class: requires 0 < G < infinity");
    }
    if (!(alpha > 1.0)) throw std::domain_error("stopping_class: requires alpha > 1");
    int k = static_cast<int>(std::floor(std::log(g) / std::log(alpha)));
    // Snap so that alpha^k < g <= alpha^(k+1) holds for the pow the selection
    // scans use, immune to rounding in the logarithms.
    while (!(std::pow(alpha, k) < g)) --k;
    while (!(g <= std::pow(alpha, k + 1))) ++k;
    return k;
}

std::vector<double> norm_ratio_values(const ExponentField& tau, const GridFunction& gw,
                                      const CubeLattice& lattice, double tol, int jobs) {
    if (gw.grid.box.dim != lattice.box().dim) {
        throw std::invalid_argument("norm_ratio_values: grid and lattice dimensions differ");
    }
    const std::vector<DyadicCube> cubes = lattice.cubes(false);
    const GPhiFunction phi = GPhiFunction::power(tau);
    std::vector<double> out(cubes.size(), 0.0);
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t i) {
        const DyadicCube& q = cubes[static_cast<size_t>(i)];
        const double den = chi_norm_on_grid(phi, gw.grid, q.rect, tol).value;
        if (den <= 0.0) return; // cube below grid resolution
        out[static_cast<size_t>(i)] =
            luxemburg_norm(phi, gw, tol, &q.rect).value / den;
    });
    return out;
}

StoppingFamily build_stopping_family(const std::vector<double>& g_values, double alpha,
                                     const CubeLattice& lattice) {
    if (!(alpha > 1.0)) throw std::domain_error("build_stopping_family: requires alpha > 1");
    const std::vector<DyadicCube> cubes = lattice.cubes(false);
    if (g_values.size() != cubes.size()) {
        throw std::invalid_argument(
            "build_stopping_family: G values must cover the dyadic lattice in enumeration order");
    }
    for (double g : g_values) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw std::domain_error("build_stopping_family: requires finite G >= 0");
        }
    }

    StoppingFamily family;
    family.alpha = alpha;

    // Maximum G over strict lattice ancestors, per cube.
    std::vector<double> anc_max(cubes.size(), 0.0);
    for (size_t i = 0; i < cubes.size(); ++i) {
        const std::optional<DyadicCube> up = lattice.parent(cubes[i]);
        if (!up) continue;
        const size_t pi = static_cast<size_t>(lattice.position(*up));
        anc_max[i] = std::max(g_values[pi], anc_max[pi]);
    }

    // Threshold range: k_hi = largest class present; k_lo = largest class of
    // a lattice root (same roots would be re-selected for every k < k_lo).
    bool any_positive = false;
    int k_hi = 0;
    int k_root = 0;
    bool any_root = false;
    for (size_t i = 0; i < cubes.size(); ++i) {
        if (!(g_values[i] > 0.0)) continue;
        ++family.positive_count;
        const int c = stopping_class(g_values[i], alpha);
        if (!any_positive || c > k_hi) k_hi = c;
        any_positive = true;
        if (cubes[i].level == lattice.j_min()) {
            if (!any_root || c > k_root) k_root = c;
            any_root = true;
        }
    }
    if (!any_positive) {
        family.k_lo = 0;
        family.k_hi = -1;
        family.packing_constant = 0.0;
        family.packing_ok = true;
        return family;
    }
    family.k_lo = any_root ? k_root : k_hi;
    family.k_hi = k_hi;

    family.levels.assign(static_cast<size_t>(family.level_count()), {});
    for (int k = family.k_lo; k <= family.k_hi; ++k) {
        const double threshold = std::pow(alpha, k);
        std::vector<StoppingEntry>& level = family.levels[static_cast<size_t>(k - family.k_lo)];
        for (size_t i = 0; i < cubes.size(); ++i) {
            if (g_values[i] > threshold && !(anc_max[i] > threshold)) {
                StoppingEntry e;
                e.cube = cubes[i];
                e.g_value = g_values[i];
                level.push_back(e);
            }
        }
    }

    // Intersection with the next level's union and residual measures; the
    // packing constant is a strict upper envelope of alpha * ratio.
    double max_ratio = 0.0;
    for (int k = family.k_lo; k <= family.k_hi; ++k) {
        std::vector<StoppingEntry>& level = family.levels[static_cast<size_t>(k - family.k_lo)];
        const std::vector<StoppingEntry>* next =
            k < family.k_hi ? &family.levels[static_cast<size_t>(k + 1 - family.k_lo)] : nullptr;
        for (StoppingEntry& e : level) {
            double inter = 0.0;
            if (next) {
                for (const StoppingEntry& e2 : *next) {
                    const Rect cap = e.cube.rect.intersect(e2.cube.rect);
                    if (!cap.empty()) inter += cap.measure();
                }
            }
            e.intersection_measure = inter;
            e.residual_measure = e.cube.measure() - inter;
            if (e.cube.measure() > 0.0) {
                max_ratio = std::max(max_ratio, inter / e.cube.measure());
            }
        }
    }
    constexpr double kNudge = 0x1p-40;
    family.packing_constant = alpha * std::max(max_ratio * (1.0 + kNudge), kNudge);
    family.packing_ok = family.packing_constant < alpha;
    return family;
}

double LocalSumReport::ratio() const {
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

LocalSumReport local_sum_bound_check(const Kernel& kernel, const GridFunction& f,
                                     const ExponentField& omega, const DyadicCube& q0,
                                     const CubeLattice& lattice, double delta, double eps,
                                     double tol, int jobs) {
    if (!(delta > 0.0) || !(eps >= 0.0)) {
        throw std::domain_error("local_sum_bound_check: requires delta > 0 and eps >= 0");
    }
    const Grid& grid = f.grid;
    const Rect box_rect = grid.box.rect();
    const GPhiFunction phi = GPhiFunction::power(omega);
    const std::vector<DyadicCube> sub = lattice.cubes(
        false, [&](const DyadicCube& q) { return q0.rect.contains_rect(q.rect); });

    LocalSumReport report;
    std::vector<double> terms(sub.size(), 0.0);
    std::vector<unsigned char> clip(sub.size(), 0);
    parallel_for(static_cast<int64_t>(sub.size()), jobs, [&](int64_t i) {
        const DyadicCube& q = sub[static_cast<size_t>(i)];
        const Rect three = q.rect.scaled(3.0);
        const Rect region = three.intersect(box_rect);
        const double den = chi_norm_on_grid(phi, grid, region, tol).value;
        if (den <= 0.0) return;
        const double num = luxemburg_norm(phi, f, tol, &region).value;
        if (num > 0.0 && !box_rect.contains_rect(three)) clip[static_cast<size_t>(i)] = 1;
        const double three_meas = std::pow(3.0, grid.box.dim) * q.measure();
        terms[static_cast<size_t>(i)] =
            kernel.annulus_sup(0.5 * q.side_length()) * three_meas * q.measure() * num / den;
    });
    for (size_t i = 0; i < sub.size(); ++i) {
        report.lhs += terms[i];
        if (clip[i]) report.clipped = true;
    }

    const Rect three0 = q0.rect.scaled(3.0).intersect(box_rect);
    const double den0 = chi_norm_on_grid(phi, grid, three0, tol).value;
    if (den0 > 0.0) {
        const double num0 = luxemburg_norm(phi, f, tol, &three0).value;
        report.rhs = kernel.ball_integral(delta * (1.0 + eps) * q0.side_length()) *
                     std::pow(3.0, grid.box.dim) * q0.measure() * num0 / den0;
    }
    return report;
}

double disjoint_sum_ratio(const ExponentField& p, const GridFunction& f, const GridFunction& g,
                          const std::vector<DyadicCube>& family, double tol) {
    const GPhiFunction phi = GPhiFunction::power(p);
    const GPhiFunction phi_conj = GPhiFunction::power(p.conjugate());
    const double fn = luxemburg_norm(phi, f, tol).value;
    const double gn = luxemburg_norm(phi_conj, g, tol).value;
    if (!(fn > 0.0) || !(gn > 0.0)) {
        throw std::domain_error("disjoint_sum_ratio: f and g must have positive norms");
    }
    double sum = 0.0;
    for (const DyadicCube& q : family) {
        sum += luxemburg_norm(phi, f, tol, &q.rect).value *
               luxemburg_norm(phi_conj, g, tol, &q.rect).value;
    }
    return sum / (fn * gn);
}

double overlapping_sum_ratio(const ExponentField& p, const GridFunction& f,
                             const GridFunction& g, const DyadicCube& q0, int depth,
                             const CubeLattice& lattice, double tol) {
    if (depth < 0) throw std::invalid_argument("overlapping_sum_ratio: requires depth >= 0");
    if (q0.level + depth > lattice.j_max()) {
        throw std::invalid_argument("overlapping_sum_ratio: depth exceeds lattice truncation");
    }
    const Grid& grid = f.grid;
    const Rect box_rect = grid.box.rect();
    const GPhiFunction phi = GPhiFunction::power(p);
    const GPhiFunction phi_conj = GPhiFunction::power(p.conjugate());

    const Rect three0 = q0.rect.scaled(3.0).intersect(box_rect);
    const double den = luxemburg_norm(phi, f, tol, &three0).value *
                       luxemburg_norm(phi_conj, g, tol, &three0).value;
    if (!(den > 0.0)) {
        throw std::domain_error("overlapping_sum_ratio: denominator vanishes on 3Q0");
    }

    const int level = q0.level + depth;
    double sum = 0.0;
    for (const DyadicCube& q : lattice.cubes(false, [&](const DyadicCube& c) {
             return c.level == level && q0.rect.contains_rect(c.rect);
         })) {
        const Rect three = q.rect.scaled(3.0).intersect(box_rect);
        sum += luxemburg_norm(phi, f, tol, &three).value *
               luxemburg_norm(phi_conj, g, tol, &three).value;
    }
    return sum / den;
}

} // namespace varlex
