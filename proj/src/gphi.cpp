#include "varlex/gphi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varlex {

namespace {
constexpr double kE = 2.718281828459045235360287471352662498;
}

// ===== GPhiFunction =====

GPhiFunction::GPhiFunction(ExponentField alpha, ExponentField theta)
    : alpha_(std::move(alpha)), theta_(std::move(theta)) {
    if (!(alpha_.p_minus() > 0.0)) {
        throw std::domain_error("GPhiFunction: requires alpha_minus > 0");
    }
    if (!(theta_.p_minus() >= 0.0)) {
        throw std::domain_error("GPhiFunction: requires theta >= 0");
    }
    if (alpha_.box().dim != theta_.box().dim) {
        throw std::invalid_argument("GPhiFunction: alpha and theta must share a box dimension");
    }
    theta_zero_ = theta_.p_plus() == 0.0;
}

GPhiFunction GPhiFunction::power(const ExponentField& p) {
    return GPhiFunction(p, ExponentField::constant(p.box(), 0.0));
}

GPhiFunction GPhiFunction::power_log(const ExponentField& alpha, const ExponentField& theta) {
    return GPhiFunction(alpha, theta);
}

GPhiFunction GPhiFunction::identity(const Box& box) {
    return GPhiFunction(ExponentField::constant(box, 1.0), ExponentField::constant(box, 0.0));
}

double GPhiFunction::operator()(const Point& x, double t) const {
    if (t == 0.0) return 0.0;
    if (!(t >= 0.0)) throw std::domain_error("GPhiFunction: requires t >= 0");
    const double a = alpha_(x);
    double v = std::pow(t, a);
    if (!theta_zero_) {
        const double th = theta_(x);
        if (th != 0.0) v *= std::pow(std::log(kE + t), th);
    }
    return v;
}

double GPhiFunction::inverse(const Point& x, double s, double tol) const {
    if (s == 0.0) return 0.0;
    if (!(s > 0.0)) throw std::domain_error("GPhiFunction::inverse: requires s >= 0");
    const double a = alpha_(x);
    const double th = theta_zero_ ? 0.0 : theta_(x);
    if (th == 0.0) return std::pow(s, 1.0 / a);

    // Bracket [lo, hi] with phi(lo) < s <= phi(hi). Since theta >= 0 and
    // log(e+t) >= 1, hi = s^(1/a) is always an upper bracket.
    double hi = std::pow(s, 1.0 / a);
    if (!std::isfinite(hi)) hi = 1e300;
    double lo = hi * 0.5;
    while ((*this)(x, lo) >= s && lo > 1e-300) {
        hi = lo;
        lo *= 0.5;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = (*this)(x, mid);
        if (std::abs(v - s) <= tol * s) return mid;
        if (v >= s) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ===== conjugation =====

ConjugationGrid ConjugationGrid::geometric(double t_min, double t_max, int points) {
    if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
        throw std::invalid_argument("ConjugationGrid: requires 0 < t_min < t_max and points >= 2");
    }
    ConjugationGrid g;
    g.t.resize(points);
    g.log_t.resize(points);
    g.loglog_e_t.resize(points);
    const double step = std::log(t_max / t_min) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double ti = t_min * std::exp(step * i);
        g.t[i] = ti;
        g.log_t[i] = std::log(ti);
        g.loglog_e_t[i] = std::log(std::log(kE + ti));
    }
    return g;
}

double conjugate_value(const GPhiFunction& phi, const Point& x, double u, const ConjugationGrid& grid) {
    if (!(u >= 0.0)) throw std::domain_error("conjugate_value: requires u >= 0");
    const double a = phi.alpha_at(x);
    const double th = phi.theta_zero() ? 0.0 : phi.theta_at(x);
    double best = 0.0; // t = 0 contributes 0
    const int n = grid.size();
    for (int i = 0; i < n; ++i) {
        // phi(x,t_i) = exp(a log t_i + th log log(e+t_i))
        const double pv = std::exp(a * grid.log_t[i] + th * grid.loglog_e_t[i]);
        const double cand = grid.t[i] * u - pv;
        if (cand > best) best = cand;
    }
    return best;
}

double young_defect(const GPhiFunction& phi, const Point& x, double v, double u,
                    const ConjugationGrid& grid) {
    if (!(v >= 0.0) || !(u >= 0.0)) throw std::domain_error("young_defect: requires u, v >= 0");
    double conj = conjugate_value(phi, x, u, grid);
    if (v > 0.0) conj = std::max(conj, v * u - phi(x, v));
    return phi(x, v) + conj - v * u;
}

double conjugate_inverse(const GPhiFunction& phi, const Point& x, double s,
                         const ConjugationGrid& grid, double tol) {
    if (s == 0.0) return 0.0;
    if (!(s > 0.0)) throw std::domain_error("conjugate_inverse: requires s >= 0");
    auto value = [&](double u) { return conjugate_value(phi, x, u, grid); };
    double hi = 1.0;
    int guard = 0;
    while (value(hi) < s) {
        hi *= 2.0;
        if (++guard > 2000) throw std::domain_error("conjugate_inverse: no finite bracket");
    }
    double lo = 0.0;
    if (hi == 1.0) {
        lo = 0.5;
        while (lo > 1e-300 && value(lo) >= s) {
            hi = lo;
            lo *= 0.5;
        }
        if (value(lo) >= s) lo = 0.0;
    } else {
        lo = hi * 0.5;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double mv = value(mid);
        if (mv >= s && mv <= s * (1.0 + tol)) return mid;
        if (mv >= s) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= tol * hi) break;
    }
    return hi;
}

// ===== example triples =====

std::pair<PhiTriple, PhiTriple> build_example_triple(
    int which, const ExponentField& p, double sigma,
    const std::optional<ExponentField>& mu, const std::optional<ExponentField>& nu,
    double eps) {
    if (which != 1 && which != 2) {
        throw std::invalid_argument("build_example_triple: `which` must be 1 or 2");
    }
    if (!(p.p_minus() > 1.0)) throw std::domain_error("build_example_triple: requires p_minus > 1");
    const ExponentField pp = p.conjugate();
    const double ratio = pp.p_plus() / pp.p_minus();
    if (!(sigma > ratio)) {
        throw std::domain_error("build_example_triple: requires sigma > (p')^+ / (p')^-");
    }
    const Box& box = p.box();
    const ExponentField sp = pp.scaled(sigma);       // sigma p'(x) > 1
    const ExponentField spc = sp.conjugate();        // (sigma p')'(x)

    if (which == 1) {
        GPhiFunction A = GPhiFunction::power_log(sp, sp);
        GPhiFunction B = GPhiFunction::power(spc);
        GPhiFunction D = GPhiFunction::power_log(ExponentField::constant(box, 1.0),
                                                 ExponentField::constant(box, 1.0));
        PhiTriple t{A, B, D};
        return {t, t};
    }

    if (!mu.has_value() || !nu.has_value()) {
        throw std::invalid_argument("build_example_triple: which=2 requires mu and nu fields");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("build_example_triple: requires eps in (0,1)");
    }
    // Gap condition 1/(sigma p'(x)) - 1/mu(x) > eps pointwise, checked on a
    // dense sample through the cached extremes of the reciprocal difference.
    // Since both sides are fields, test at the worst corners via extremes.
    const ExponentField& muf = *mu;
    const ExponentField& nuf = *nu;
    {
        // min over samples of 1/(sigma p') - 1/mu
        const Rect r = box.rect();
        const int per_axis = box.dim == 1 ? 2048 : 64;
        double worst = std::numeric_limits<double>::infinity();
        const int m = per_axis;
        auto probe = [&](const Point& x) {
            const double v = 1.0 / sp(x) - 1.0 / muf(x);
            worst = std::min(worst, v);
        };
        if (box.dim == 1) {
            const double h = r.side(0) / m;
            for (int i = 0; i <= m; ++i) probe(Point{r.lo[0] + i * h, 0.0});
            for (int i = 0; i < m; ++i) probe(Point{r.lo[0] + (i + 0.5) * h, 0.0});
        } else {
            const double hx = r.side(0) / m, hy = r.side(1) / m;
            for (int iy = 0; iy <= m; ++iy)
                for (int ix = 0; ix <= m; ++ix)
                    probe(Point{r.lo[0] + ix * hx, r.lo[1] + iy * hy});
        }
        if (!(worst > eps)) {
            throw std::domain_error(
                "build_example_triple: requires 1/(sigma p'(x)) - 1/mu(x) > eps pointwise");
        }
    }
    const ExponentField theta_a = ExponentField::combine(nuf, muf, ExponentField::CombineMode::Product);
    const ExponentField a = ExponentField::combine(muf, spc, ExponentField::CombineMode::Sum); // 1/a = 1/mu + 1/spc
    const ExponentField theta_d = ExponentField::combine(a, nuf, ExponentField::CombineMode::Product);
    GPhiFunction A = GPhiFunction::power_log(muf, theta_a);
    GPhiFunction B = GPhiFunction::power(spc);
    GPhiFunction D = GPhiFunction::power_log(a, theta_d);
    PhiTriple t{A, B, D};
    return {t, t};
}

} // namespace varlex
