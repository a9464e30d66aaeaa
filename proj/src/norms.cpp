#include "varlex/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace varlex {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;
constexpr int kMaxIterations = 200;

// Cell data gathered once per norm computation so the bisection loop only
// does arithmetic: exponents, |f| and log|f| per cell, one shared measure.
struct SampledProblem {
    std::vector<double> alpha;
    std::vector<double> theta;
    std::vector<double> absf;
    std::vector<double> logf;
    double cell_measure = 0.0;
    bool theta_zero = true;

    bool all_zero() const {
        for (double v : absf) {
            if (v != 0.0) return false;
        }
        return true;
    }

    void push(double a, double th, double v) {
        alpha.push_back(a);
        theta.push_back(th);
        absf.push_back(v);
        logf.push_back(v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity());
        if (th != 0.0) theta_zero = false;
    }

    double modular_at(double lambda) const {
        const double loglam = std::log(lambda);
        double sum = 0.0;
        const size_t n = absf.size();
        for (size_t i = 0; i < n; ++i) {
            const double v = absf[i];
            if (v == 0.0) continue;
            double term = std::exp(alpha[i] * (logf[i] - loglam));
            const double th = theta[i];
            if (th != 0.0) {
                term *= std::pow(std::log(kE + v / lambda), th);
            }
            sum += term;
        }
        return sum * cell_measure;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : absf) m = std::max(m, v);
        return m;
    }
};

SampledProblem gather(const GPhiFunction& phi, const GridFunction& f, const Rect* region) {
    SampledProblem prob;
    prob.cell_measure = f.grid.cell_measure();
    const bool tz = phi.theta_zero();
    auto add = [&](int64_t i, const Point& x) {
        const double v = f.values[static_cast<size_t>(i)];
        if (!std::isfinite(v)) throw std::domain_error("luxemburg_norm: non-finite sample in f");
        prob.push(phi.alpha_at(x), tz ? 0.0 : phi.theta_at(x), std::abs(v));
    };
    if (region == nullptr) {
        const int64_t n = f.grid.cell_count();
        prob.alpha.reserve(n);
        prob.theta.reserve(n);
        prob.absf.reserve(n);
        prob.logf.reserve(n);
        for (int64_t i = 0; i < n; ++i) add(i, f.grid.cell_midpoint(i));
    } else {
        f.grid.for_cells_in(*region, add);
    }
    return prob;
}

SampledProblem gather_indicator(const GPhiFunction& phi, const Box& box, const Rect& region,
                                int subdiv) {
    if (subdiv < 1) throw std::invalid_argument("chi_norm: requires subdiv >= 1");
    SampledProblem prob;
    const Rect clipped = region.intersect(box.rect());
    if (clipped.empty()) {
        prob.cell_measure = 0.0;
        return prob;
    }
    const bool tz = phi.theta_zero();
    if (box.dim == 1) {
        const double h = clipped.side(0) / subdiv;
        prob.cell_measure = h;
        for (int i = 0; i < subdiv; ++i) {
            const Point x{clipped.lo[0] + (i + 0.5) * h, 0.0};
            prob.push(phi.alpha_at(x), tz ? 0.0 : phi.theta_at(x), 1.0);
        }
    } else {
        const double hx = clipped.side(0) / subdiv;
        const double hy = clipped.side(1) / subdiv;
        prob.cell_measure = hx * hy;
        for (int iy = 0; iy < subdiv; ++iy) {
            for (int ix = 0; ix < subdiv; ++ix) {
                const Point x{clipped.lo[0] + (ix + 0.5) * hx, clipped.lo[1] + (iy + 0.5) * hy};
                prob.push(phi.alpha_at(x), tz ? 0.0 : phi.theta_at(x), 1.0);
            }
        }
    }
    return prob;
}

// Bisection on a nonincreasing modular map; terminates when the modular at
// the midpoint is within tol of 1.
template <typename Modular>
NormResult solve_luxemburg(const Modular& rho, double seed, double tol) {
    if (!(tol > 0.0) || !(tol < 1.0)) throw std::invalid_argument("luxemburg_norm: requires 0 < tol < 1");
    NormResult res;
    double lo = 0.0, hi = 0.0;
    double m_seed = rho(seed);
    ++res.iterations;
    if (m_seed > 1.0) {
        lo = seed;
        hi = seed * 2.0;
        for (int i = 0; i < 1100 && rho(hi) > 1.0; ++i) {
            lo = hi;
            hi *= 2.0;
            ++res.iterations;
            if (!std::isfinite(hi)) throw std::domain_error("luxemburg_norm: norm overflow");
        }
    } else {
        hi = seed;
        lo = seed * 0.5;
        for (int i = 0; i < 1100 && rho(lo) <= 1.0; ++i) {
            hi = lo;
            lo *= 0.5;
            ++res.iterations;
            if (lo < 1e-300) {
                // Modular never reaches 1: the norm is numerically 0.
                res.value = 0.0;
                res.modular_at_value = rho(lo);
                res.bracket_lo = 0.0;
                res.bracket_hi = lo;
                return res;
            }
        }
    }
    double best = hi;
    double best_mod = rho(hi);
    for (int i = 0; i < kMaxIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double m = rho(mid);
        ++res.iterations;
        if (std::isfinite(m)) {
            if (std::abs(m - 1.0) <= tol) {
                res.value = mid;
                res.modular_at_value = m;
                res.bracket_lo = lo;
                res.bracket_hi = hi;
                return res;
            }
        }
        if (m <= 1.0) {
            hi = mid;
            best = mid;
            best_mod = m;
        } else {
            lo = mid;
        }
        if (hi - lo <= 1e-15 * hi) break;
    }
    res.value = best;
    res.modular_at_value = best_mod;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    return res;
}

NormResult solve_problem(const SampledProblem& prob, const GPhiFunction& phi, double tol) {
    NormResult res;
    if (prob.absf.empty() || prob.cell_measure == 0.0 || prob.all_zero()) return res;

    if (phi.constant_power() && prob.theta_zero) {
        // || f ||_p = (integral |f|^p)^(1/p): modular(f/lambda) = lambda^-p * rho(f).
        const double p = prob.alpha[0];
        double s = 0.0;
        for (size_t i = 0; i < prob.absf.size(); ++i) {
            if (prob.absf[i] != 0.0) s += std::exp(p * prob.logf[i]);
        }
        s *= prob.cell_measure;
        res.value = std::pow(s, 1.0 / p);
        res.modular_at_value = 1.0;
        res.iterations = 0;
        res.bracket_lo = res.value;
        res.bracket_hi = res.value;
        return res;
    }
    return solve_luxemburg([&](double lam) { return prob.modular_at(lam); }, prob.max_abs(), tol);
}

} // namespace

double modular(const GPhiFunction& phi, const GridFunction& f, const Rect* region, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("modular: requires lambda > 0");
    const SampledProblem prob = gather(phi, f, region);
    if (prob.absf.empty()) return 0.0;
    return prob.modular_at(lambda);
}

NormResult luxemburg_norm(const GPhiFunction& phi, const GridFunction& f, double tol,
                          const Rect* region) {
    const SampledProblem prob = gather(phi, f, region);
    return solve_problem(prob, phi, tol);
}

NormResult chi_norm(const GPhiFunction& phi, const Box& box, const Rect& region, int subdiv,
                    double tol) {
    const SampledProblem prob = gather_indicator(phi, box, region, subdiv);
    return solve_problem(prob, phi, tol);
}

NormResult chi_norm_on_grid(const GPhiFunction& phi, const Grid& grid, const Rect& region,
                            double tol) {
    SampledProblem prob;
    prob.cell_measure = grid.cell_measure();
    const bool tz = phi.theta_zero();
    grid.for_cells_in(region, [&](int64_t, const Point& x) {
        prob.push(phi.alpha_at(x), tz ? 0.0 : phi.theta_at(x), 1.0);
    });
    return solve_problem(prob, phi, tol);
}

NormResult weighted_norm(const ExponentField& p, const GridFunction& f, const GridFunction& w,
                         double tol) {
    if (!(f.grid == w.grid)) throw std::invalid_argument("weighted_norm: f and w must share a grid");
    GridFunction fw(f.grid);
    for (int64_t i = 0; i < f.size(); ++i) {
        fw[i] = f[i] * w[i];
    }
    return luxemburg_norm(GPhiFunction::power(p), fw, tol);
}

double cube_norm_ratio(const GPhiFunction& phi, const GridFunction& f, const DyadicCube& q,
                       double tol) {
    const NormResult den = chi_norm_on_grid(phi, f.grid, q.rect, tol);
    if (den.value <= 0.0) throw std::domain_error("cube_norm_ratio: cube contains no grid cells");
    const NormResult num = luxemburg_norm(phi, f, tol, &q.rect);
    return num.value / den.value;
}

// ===== conjugate-space norms =====

namespace {

// Cells plus the per-cell values of phi on the conjugation grid, so each
// bisection step is a fused multiply/max sweep.
struct ConjugateProblem {
    std::vector<double> absg;
    std::vector<double> phi_at_t; // row-major [cell][grid point]
    double cell_measure = 0.0;
    const ConjugationGrid* cgrid = nullptr;

    bool all_zero() const {
        for (double v : absg) {
            if (v != 0.0) return false;
        }
        return true;
    }

    double modular_at(double lambda) const {
        const int k = cgrid->size();
        double sum = 0.0;
        for (size_t i = 0; i < absg.size(); ++i) {
            const double u = absg[i] / lambda;
            if (u == 0.0) continue;
            const double* row = &phi_at_t[i * static_cast<size_t>(k)];
            double best = 0.0;
            for (int j = 0; j < k; ++j) {
                const double cand = cgrid->t[j] * u - row[j];
                if (cand > best) best = cand;
            }
            sum += best;
        }
        return sum * cell_measure;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : absg) m = std::max(m, v);
        return m;
    }

    void push(const GPhiFunction& phi, const Point& x, double g) {
        if (!std::isfinite(g)) throw std::domain_error("conjugate_norm: non-finite sample");
        absg.push_back(std::abs(g));
        const double a = phi.alpha_at(x);
        const double th = phi.theta_zero() ? 0.0 : phi.theta_at(x);
        const int k = cgrid->size();
        const size_t base = phi_at_t.size();
        phi_at_t.resize(base + static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            phi_at_t[base + static_cast<size_t>(j)] =
                std::exp(a * cgrid->log_t[j] + th * cgrid->loglog_e_t[j]);
        }
    }
};

ConjugateProblem gather_conjugate(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                                  const GridFunction& g, const Rect* region) {
    ConjugateProblem prob;
    prob.cgrid = &cgrid;
    prob.cell_measure = g.grid.cell_measure();
    if (region == nullptr) {
        const int64_t n = g.grid.cell_count();
        for (int64_t i = 0; i < n; ++i) {
            prob.push(phi, g.grid.cell_midpoint(i), g.values[static_cast<size_t>(i)]);
        }
    } else {
        g.grid.for_cells_in(*region, [&](int64_t i, const Point& x) {
            prob.push(phi, x, g.values[static_cast<size_t>(i)]);
        });
    }
    return prob;
}

NormResult solve_conjugate(const ConjugateProblem& prob, double tol) {
    NormResult res;
    if (prob.absg.empty() || prob.all_zero()) return res;
    return solve_luxemburg([&](double lam) { return prob.modular_at(lam); }, prob.max_abs(), tol);
}

} // namespace

double conjugate_modular(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                         const GridFunction& g, const Rect* region, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("conjugate_modular: requires lambda > 0");
    const ConjugateProblem prob = gather_conjugate(phi, cgrid, g, region);
    if (prob.absg.empty()) return 0.0;
    return prob.modular_at(lambda);
}

NormResult conjugate_norm(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                          const GridFunction& g, double tol, const Rect* region) {
    const ConjugateProblem prob = gather_conjugate(phi, cgrid, g, region);
    return solve_conjugate(prob, tol);
}

NormResult conjugate_chi_norm(const GPhiFunction& phi, const ConjugationGrid& cgrid,
                              const Box& box, const Rect& region, int subdiv, double tol) {
    if (subdiv < 1) throw std::invalid_argument("conjugate_chi_norm: requires subdiv >= 1");
    ConjugateProblem prob;
    prob.cgrid = &cgrid;
    const Rect clipped = region.intersect(box.rect());
    if (clipped.empty()) return NormResult{};
    if (box.dim == 1) {
        const double h = clipped.side(0) / subdiv;
        prob.cell_measure = h;
        for (int i = 0; i < subdiv; ++i) {
            prob.push(phi, Point{clipped.lo[0] + (i + 0.5) * h, 0.0}, 1.0);
        }
    } else {
        const double hx = clipped.side(0) / subdiv;
        const double hy = clipped.side(1) / subdiv;
        prob.cell_measure = hx * hy;
        for (int iy = 0; iy < subdiv; ++iy) {
            for (int ix = 0; ix < subdiv; ++ix) {
                prob.push(phi, Point{clipped.lo[0] + (ix + 0.5) * hx, clipped.lo[1] + (iy + 0.5) * hy}, 1.0);
            }
        }
    }
    return solve_conjugate(prob, tol);
}

} // namespace varlex
