#include "varlex/norm_formula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varlex/gphi.hpp"
#include "varlex/norms.hpp"
#include "varlex/parallel.hpp"

namespace varlex {

namespace {

// Midpoints of a uniform subdiv^dim subdivision of rect (clipped to the box
// by the caller), matching the quadrature cells chi_norm uses.
template <typename Fn>
void for_subgrid_midpoints(const Rect& rect, int subdiv, Fn&& fn) {
    const int dim = rect.dim;
    const double hx = rect.side(0) / subdiv;
    if (dim == 1) {
        for (int i = 0; i < subdiv; ++i) fn(Point{rect.lo[0] + (i + 0.5) * hx, 0.0});
        return;
    }
    const double hy = rect.side(1) / subdiv;
    for (int j = 0; j < subdiv; ++j) {
        for (int i = 0; i < subdiv; ++i) {
            fn(Point{rect.lo[0] + (i + 0.5) * hx, rect.lo[1] + (j + 0.5) * hy});
        }
    }
}

} // namespace

double power_log_inverse(double alpha, double theta, double s, double tol) {
    if (!(alpha > 0.0) || !(theta >= 0.0)) {
        throw std::domain_error("power_log_inverse: requires alpha > 0 and theta >= 0");
    }
    if (!(s >= 0.0)) throw std::domain_error("power_log_inverse: requires s >= 0");
    if (s == 0.0) return 0.0;
    if (theta == 0.0) return std::pow(s, 1.0 / alpha);
    auto phi = [&](double t) {
        return std::exp(alpha * std::log(t) + theta * std::log(std::log(std::exp(1.0) + t)));
    };
    // log(e+t) >= 1 makes s^(1/alpha) an upper bracket; halve for the lower.
    double hi = std::pow(s, 1.0 / alpha);
    if (!std::isfinite(hi)) return hi;
    double lo = hi;
    while (phi(lo) > s) lo *= 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = phi(mid);
        if (std::abs(v - s) <= tol * s) return mid;
        (v > s ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<DyadicCube> sampled_cubes(const CubeLattice& lattice, int per_level) {
    if (per_level < 1) throw std::invalid_argument("sampled_cubes: requires per_level >= 1");
    std::vector<DyadicCube> out;
    const int dim = lattice.box().dim;
    for (int level = lattice.j_min(); level <= lattice.j_max(); ++level) {
        const int64_t per_side = int64_t{1} << level;
        // Evenly spaced indices including both ends, without duplicates.
        std::vector<int64_t> picks;
        const int64_t want = std::min<int64_t>(per_level, per_side);
        for (int64_t k = 0; k < want; ++k) {
            const int64_t idx =
                want == 1 ? 0 : (k * (per_side - 1)) / (want - 1);
            if (picks.empty() || picks.back() != idx) picks.push_back(idx);
        }
        if (dim == 1) {
            for (int64_t ix : picks) out.push_back(lattice.cube_at(level, {ix, 0}));
        } else {
            // Diagonal sampling keeps the count per level comparable to 1-d.
            for (int64_t i : picks) out.push_back(lattice.cube_at(level, {i, i}));
        }
    }
    return out;
}

FormulaTable verify_norm_formula(const ExponentField& p, const ExponentField& q,
                                 const CubeLattice& lattice, int per_level, int subdiv,
                                 double tol, int jobs) {
    if (!(p.p_minus() > 1.0)) throw std::domain_error("verify_norm_formula: requires p_minus > 1");
    if (!(q.p_minus() >= 0.0)) throw std::domain_error("verify_norm_formula: requires q >= 0");
    const Box box = p.box();
    const Rect box_rect = box.rect();
    const GPhiFunction phi = GPhiFunction::power_log(p, q);
    const std::vector<DyadicCube> cubes = sampled_cubes(lattice, per_level);

    FormulaTable table;
    table.rows.assign(cubes.size(), {});
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t i) {
        FormulaRow& row = table.rows[static_cast<size_t>(i)];
        row.cube = cubes[static_cast<size_t>(i)];
        const Rect clipped = row.cube.rect.intersect(box_rect);
        row.cube_measure = clipped.measure();
        row.measured = chi_norm(phi, box, row.cube.rect, subdiv, tol).value;
        double inv_p = 0.0, q_over_p = 0.0;
        int64_t count = 0;
        for_subgrid_midpoints(clipped, subdiv, [&](const Point& x) {
            const double px = p(x);
            inv_p += 1.0 / px;
            q_over_p += q(x) / px;
            ++count;
        });
        inv_p /= static_cast<double>(count);
        q_over_p /= static_cast<double>(count);
        const double meas = row.cube_measure;
        row.predicted = std::pow(meas, inv_p) *
                        std::pow(std::log(std::exp(1.0) + 1.0 / meas), q_over_p);
        row.ratio = row.measured / row.predicted;
    });

    double sx = 0.0, sy = 0.0;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const double r = table.rows[i].ratio;
        if (i == 0) {
            table.min_ratio = table.max_ratio = r;
        } else {
            table.min_ratio = std::min(table.min_ratio, r);
            table.max_ratio = std::max(table.max_ratio, r);
        }
        sx += std::log(table.rows[i].cube_measure);
        sy += std::log(r);
    }
    const double n = static_cast<double>(table.rows.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const FormulaRow& row : table.rows) {
        const double dx = std::log(row.cube_measure) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(row.ratio) - my);
    }
    table.log_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return table;
}

bool LemmaChainReport::all_finite() const {
    return std::isfinite(log_power_osc_bound) && std::isfinite(inverse_average_bound) &&
           std::isfinite(two_factor_bound) && std::isfinite(average_vs_norm_bound);
}

LemmaChainReport verify_lemma_chain(const ExponentField& p, const ExponentField& q,
                                    const CubeLattice& lattice, int per_level, int subdiv,
                                    double tol, int jobs) {
    if (!(p.p_minus() > 1.0)) throw std::domain_error("verify_lemma_chain: requires p_minus > 1");
    if (!(q.p_minus() >= 0.0)) throw std::domain_error("verify_lemma_chain: requires q >= 0");
    const Box box = p.box();
    const Rect box_rect = box.rect();
    const GPhiFunction phi_p = GPhiFunction::power(p);
    const std::vector<DyadicCube> cubes = sampled_cubes(lattice, per_level);

    struct CubeBounds {
        double osc = 0.0, inv_avg = 0.0, two_factor = 0.0, avg_vs_norm = 0.0;
    };
    std::vector<CubeBounds> bounds(cubes.size());
    parallel_for(static_cast<int64_t>(cubes.size()), jobs, [&](int64_t ci) {
        const Rect clipped = cubes[static_cast<size_t>(ci)].rect.intersect(box_rect);
        const double meas = clipped.measure();
        if (!(meas > 0.0)) return;
        const double t = 1.0 / meas;
        const double big_l = std::log(std::exp(1.0) + t);

        double q_min = 0.0, q_max = 0.0;
        double inv_p = 0.0, q_over_p = 0.0;
        double mean_inv = 0.0, mean_two = 0.0, mean_pow = 0.0;
        int64_t count = 0;
        for_subgrid_midpoints(clipped, subdiv, [&](const Point& x) {
            const double px = p(x);
            const double qx = q(x);
            if (count == 0) {
                q_min = q_max = qx;
            } else {
                q_min = std::min(q_min, qx);
                q_max = std::max(q_max, qx);
            }
            inv_p += 1.0 / px;
            q_over_p += qx / px;
            mean_inv += power_log_inverse(px, qx, t);
            const double px_conj = px / (px - 1.0);
            mean_two += std::pow(big_l, qx) * power_log_inverse(px_conj, qx, t);
            mean_pow += std::pow(meas, 1.0 / px);
            ++count;
        });
        const double n = static_cast<double>(count);
        inv_p /= n;
        q_over_p /= n;
        mean_inv /= n;
        mean_two /= n;
        mean_pow /= n;

        CubeBounds& b = bounds[static_cast<size_t>(ci)];
        b.osc = std::pow(big_l, q_max - q_min);
        b.inv_avg = power_log_inverse(1.0 / inv_p, q_over_p / inv_p, t) / mean_inv;
        b.two_factor = t / (mean_inv * mean_two);
        b.avg_vs_norm = mean_pow / chi_norm(phi_p, box, clipped, subdiv, tol).value;
    });

    LemmaChainReport report;
    for (const CubeBounds& b : bounds) {
        report.log_power_osc_bound = std::max(report.log_power_osc_bound, b.osc);
        report.inverse_average_bound = std::max(report.inverse_average_bound, b.inv_avg);
        report.two_factor_bound = std::max(report.two_factor_bound, b.two_factor);
        report.average_vs_norm_bound = std::max(report.average_vs_norm_bound, b.avg_vs_norm);
    }
    return report;
}

} // namespace varlex
