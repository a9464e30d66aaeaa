#include "varlex/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "varlex/parallel.hpp"

namespace varlex {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Surface measure of the unit sphere: 2 points in R^1, circle length in R^2.
double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * kPi; }

} // namespace

// ===== construction =====

Kernel Kernel::fractional(int dim, double a) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Kernel: dim must be 1 or 2");
    if (!(a > 0.0) || !(a < static_cast<double>(dim))) {
        throw std::domain_error("Kernel::fractional: requires 0 < a < n");
    }
    Kernel k;
    k.profile_ = Profile::Fractional;
    k.dim_ = dim;
    k.a_ = a;
    return k;
}

Kernel Kernel::bessel_like(int dim, double b, double lambda) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Kernel: dim must be 1 or 2");
    if (!(b > 0.0)) throw std::domain_error("Kernel::bessel_like: requires b > 0");
    if (!(lambda > 0.0)) throw std::domain_error("Kernel::bessel_like: requires lambda > 0");
    Kernel k;
    k.profile_ = Profile::BesselLike;
    k.dim_ = dim;
    k.a_ = b;
    k.lambda_ = lambda;
    return k;
}

Kernel Kernel::tabulated(int dim, std::vector<std::pair<double, double>> knots) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Kernel: dim must be 1 or 2");
    if (knots.size() < 2) throw std::invalid_argument("Kernel::tabulated: requires at least 2 knots");
    for (size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].second >= 0.0)) {
            throw std::invalid_argument("Kernel::tabulated: requires nonnegative values");
        }
        if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
            throw std::invalid_argument("Kernel::tabulated: radii must be strictly increasing");
        }
    }
    if (!(knots.front().first >= 0.0)) {
        throw std::invalid_argument("Kernel::tabulated: radii must be nonnegative");
    }
    Kernel k;
    k.profile_ = Profile::Tabulated;
    k.dim_ = dim;
    k.knots_ = std::move(knots);
    return k;
}

// ===== pointwise value =====

double Kernel::value(double r) const {
    if (!(r > 0.0)) throw std::domain_error("Kernel::value: requires r > 0");
    switch (profile_) {
        case Profile::Fractional:
            return std::pow(r, a_ - static_cast<double>(dim_));
        case Profile::BesselLike:
            return std::pow(r, a_ - static_cast<double>(dim_)) * std::exp(-lambda_ * r);
        case Profile::Tabulated: {
            if (r <= knots_.front().first) return knots_.front().second;
            if (r >= knots_.back().first) return knots_.back().second;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                                       [](double v, const std::pair<double, double>& kn) {
                                           return v < kn.first;
                                       });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (r - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        }
    }
    return 0.0;
}

// ===== radial integral =====

double Kernel::radial_integral(double t) const {
    // integral_0^t k(r) r^(n-1) dr
    const double n = static_cast<double>(dim_);
    switch (profile_) {
        case Profile::Fractional:
            // k(r) r^(n-1) = r^(a-1): exact.
            return std::pow(t, a_) / a_;
        case Profile::BesselLike: {
            // integrand r^(b-1) e^(-lambda r); substitute u = r^b when b < 1
            // so the integrand is continuous and smooth enough for GL.
            using gauss = boost::math::quadrature::gauss<double, 64>;
            if (a_ >= 1.0) {
                auto f = [&](double r) { return std::pow(r, a_ - 1.0) * std::exp(-lambda_ * r); };
                return gauss::integrate(f, 0.0, t);
            }
            const double ub = std::pow(t, a_);
            auto f = [&](double u) { return std::exp(-lambda_ * std::pow(u, 1.0 / a_)) / a_; };
            return gauss::integrate(f, 0.0, ub);
        }
        case Profile::Tabulated: {
            // Piecewise-linear k; integrate k(r) r^(n-1) exactly per segment.
            auto segment = [&](double r0, double r1, double k0, double k1) {
                if (r1 <= r0) return 0.0;
                const double slope = (k1 - k0) / (r1 - r0);
                const double c0 = k0 - slope * r0; // k(r) = c0 + slope * r
                if (dim_ == 1) {
                    // integral (c0 + s r) dr
                    return c0 * (r1 - r0) + 0.5 * slope * (r1 * r1 - r0 * r0);
                }
                // integral (c0 + s r) r dr
                return 0.5 * c0 * (r1 * r1 - r0 * r0) + slope * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
            };
            double total = 0.0;
            const double r_first = knots_.front().first;
            // Constant extension below the first knot.
            if (r_first > 0.0) {
                const double upper = std::min(t, r_first);
                const double k0 = knots_.front().second;
                total += dim_ == 1 ? k0 * upper : 0.5 * k0 * upper * upper;
                if (t <= r_first) return total;
            }
            for (size_t i = 0; i + 1 < knots_.size(); ++i) {
                const double r0 = knots_[i].first;
                const double r1 = knots_[i + 1].first;
                if (t <= r0) break;
                const double hi = std::min(t, r1);
                if (hi <= r0) continue;
                const double k0 = knots_[i].second;
                const double k1 = knots_[i].second +
                                  (knots_[i + 1].second - knots_[i].second) *
                                      ((hi - r0) / (r1 - r0));
                total += segment(r0, hi, k0, k1);
            }
            // Constant extension above the last knot.
            const double r_last = knots_.back().first;
            if (t > r_last) {
                const double kl = knots_.back().second;
                total += dim_ == 1 ? kl * (t - r_last) : 0.5 * kl * (t * t - r_last * r_last);
            }
            (void)n;
            return total;
        }
    }
    return 0.0;
}

double Kernel::ball_integral(double t) const {
    if (!(t > 0.0)) throw std::domain_error("Kernel::ball_integral: requires t > 0");
    return sphere_measure(dim_) * radial_integral(t);
}

double Kernel::annulus_integral(double inner, double outer) const {
    if (!(inner >= 0.0) || !(outer > inner)) {
        throw std::domain_error("Kernel::annulus_integral: requires 0 <= inner < outer");
    }
    if (profile_ == Profile::BesselLike && inner > 0.0) {
        // Integrate r^(b-1) e^(-lambda r) on [inner, outer] directly; away
        // from 0 the integrand is smooth, and far annuli would otherwise
        // cancel out of the difference of two ball integrals.
        using gauss = boost::math::quadrature::gauss<double, 64>;
        const double n = static_cast<double>(dim_);
        auto f = [&](double r) { return std::pow(r, a_ - n) * std::exp(-lambda_ * r) *
                                        std::pow(r, n - 1.0); };
        return sphere_measure(dim_) * gauss::integrate(f, inner, outer);
    }
    const double lower = inner > 0.0 ? radial_integral(inner) : 0.0;
    return sphere_measure(dim_) * (radial_integral(outer) - lower);
}

// ===== annulus supremum =====

double Kernel::annulus_sup(double t) const {
    if (!(t > 0.0)) throw std::domain_error("Kernel::annulus_sup: requires t > 0");
    switch (profile_) {
        case Profile::Fractional:
            // Decreasing: the sup over (t, 2t] is the limit at the inner radius.
            return value(t);
        case Profile::BesselLike: {
            const double n = static_cast<double>(dim_);
            if (a_ <= n) return value(t); // decreasing
            const double r_peak = (a_ - n) / lambda_;
            if (r_peak <= t) return value(t);
            if (r_peak >= 2.0 * t) return value(2.0 * t);
            return value(r_peak);
        }
        case Profile::Tabulated: {
            // Piecewise linear: max over endpoints and interior knots.
            double best = std::max(value(t), value(2.0 * t));
            for (const auto& kn : knots_) {
                if (kn.first > t && kn.first <= 2.0 * t) best = std::max(best, kn.second);
            }
            return best;
        }
    }
    return 0.0;
}

bool Kernel::radially_nonincreasing() const {
    switch (profile_) {
        case Profile::Fractional:
            return true;
        case Profile::BesselLike:
            return a_ <= static_cast<double>(dim_);
        case Profile::Tabulated:
            for (size_t i = 1; i < knots_.size(); ++i) {
                if (knots_[i].second > knots_[i - 1].second) return false;
            }
            return true;
    }
    return false;
}

double k_tilde(const Kernel& k, double t) { return k.ball_integral(t); }
double k_bar(const Kernel& k, double t) { return k.annulus_sup(t); }

double self_cell_radius(const Grid& grid) {
    const double h = grid.cell_size();
    // Equal-measure ball: 2r = h in 1-d, pi r^2 = h^2 in 2-d.
    return grid.box.dim == 1 ? 0.5 * h : h / std::sqrt(kPi);
}

// ===== dyadic annulus comparison =====

ClassDReport check_class_d(const Kernel& kernel, double delta, double eps, int k_lo, int k_hi) {
    if (!(delta > 0.0)) throw std::invalid_argument("check_class_d: requires delta > 0");
    if (!(eps >= 0.0) || !(eps < 1.0)) throw std::invalid_argument("check_class_d: requires 0 <= eps < 1");
    if (k_hi < k_lo) throw std::invalid_argument("check_class_d: requires k_lo <= k_hi");
    ClassDReport rep;
    rep.delta = delta;
    rep.eps = eps;
    rep.k_lo = k_lo;
    rep.k_hi = k_hi;
    double worst = 0.0;
    const double n = static_cast<double>(kernel.dim());
    for (int k = k_lo; k <= k_hi; ++k) {
        const double tk = std::ldexp(1.0, k); // 2^k
        const double lhs = kernel.annulus_sup(tk);
        const double inner = delta * (1.0 - eps) * tk;
        const double outer = 2.0 * delta * (1.0 + eps) * tk;
        const double rhs = std::pow(tk, -n) * kernel.annulus_integral(inner, outer);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        if (lhs > 0.0) {
            worst = rhs > 0.0 ? std::max(worst, lhs / rhs)
                              : std::numeric_limits<double>::infinity();
        }
    }
    rep.c_estimate = worst;
    rep.pass = std::isfinite(worst);
    return rep;
}

// ===== commutator =====

GridFunction apply_commutator(const Kernel& kernel, const GridFunction& b, int m,
                              const GridFunction& f, int jobs) {
    if (!(b.grid == f.grid)) throw std::invalid_argument("apply_commutator: b and f must share a grid");
    if (m < 0) throw std::invalid_argument("apply_commutator: requires m >= 0");
    if (kernel.dim() != f.grid.box.dim) {
        throw std::invalid_argument("apply_commutator: kernel and grid dimensions differ");
    }
    if (!b.all_finite() || !f.all_finite()) {
        throw std::domain_error("apply_commutator: non-finite samples");
    }
    const Grid& grid = f.grid;
    const int dim = grid.box.dim;
    const int64_t ncells = grid.cell_count();
    const double meas = grid.cell_measure();
    const double self_integral = kernel.ball_integral(self_cell_radius(grid));

    // Midpoint coordinates, gathered once.
    std::vector<double> xs(static_cast<size_t>(ncells)), ys;
    if (dim == 2) ys.resize(static_cast<size_t>(ncells));
    for (int64_t i = 0; i < ncells; ++i) {
        const Point p = grid.cell_midpoint(i);
        xs[static_cast<size_t>(i)] = p[0];
        if (dim == 2) ys[static_cast<size_t>(i)] = p[1];
    }

    GridFunction out(grid);
    auto ipow = [](double v, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= v;
        return r;
    };
    parallel_for(ncells, jobs, [&](int64_t i) {
        const double xi = xs[static_cast<size_t>(i)];
        const double yi = dim == 2 ? ys[static_cast<size_t>(i)] : 0.0;
        const double bi = b.values[static_cast<size_t>(i)];
        double acc = 0.0;
        for (int64_t j = 0; j < ncells; ++j) {
            if (j == i) continue;
            const double fj = f.values[static_cast<size_t>(j)];
            if (fj == 0.0) continue;
            double dx = xi - xs[static_cast<size_t>(j)];
            double r;
            if (dim == 2) {
                const double dy = yi - ys[static_cast<size_t>(j)];
                r = std::sqrt(dx * dx + dy * dy);
            } else {
                r = std::abs(dx);
            }
            const double factor = m == 0 ? 1.0 : ipow(bi - b.values[static_cast<size_t>(j)], m);
            acc += factor * kernel.value(r) * fj;
        }
        acc *= meas;
        if (m == 0) acc += f.values[static_cast<size_t>(i)] * self_integral;
        out.values[static_cast<size_t>(i)] = acc;
    });
    return out;
}

} // namespace varlex
