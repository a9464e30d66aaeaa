#include "varlex/exponent_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varlex {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double norm2(const Point& x, int dim) {
    double s = x[0] * x[0];
    if (dim == 2) s += x[1] * x[1];
    return std::sqrt(s);
}

} // namespace

// ===== Impl hierarchy =====

struct ExponentField::Impl {
    Box box;
    explicit Impl(const Box& b) : box(b) {}
    virtual ~Impl() = default;
    virtual double eval(const Point& x) const = 0;
    virtual bool constant() const { return false; }
    // Exact extremes when available; unset means "sample".
    virtual bool exact_extremes(const Rect&, double&, double&) const { return false; }
    virtual double at_infinity() const { return std::numeric_limits<double>::quiet_NaN(); }
};

namespace {

struct ConstantImpl final : ExponentField::Impl {
    double value;
    ConstantImpl(const Box& b, double v) : Impl(b), value(v) {}
    double eval(const Point&) const override { return value; }
    bool constant() const override { return true; }
    bool exact_extremes(const Rect&, double& lo, double& hi) const override {
        lo = hi = value;
        return true;
    }
    double at_infinity() const override { return value; }
};

struct AffineImpl final : ExponentField::Impl {
    Point slope;
    double intercept, lo, hi;
    AffineImpl(const Box& b, const Point& s, double i, double l, double h)
        : Impl(b), slope(s), intercept(i), lo(l), hi(h) {}
    double eval(const Point& x) const override {
        double v = intercept;
        for (int a = 0; a < box.dim; ++a) v += slope[a] * x[a];
        return std::clamp(v, lo, hi);
    }
};

struct LogSmoothImpl final : ExponentField::Impl {
    double p_inf, amplitude;
    LogSmoothImpl(const Box& b, double p, double a) : Impl(b), p_inf(p), amplitude(a) {}
    double eval(const Point& x) const override {
        double phase = 3.0 * (x[0] - box.center[0]);
        if (box.dim == 2) phase += 2.0 * (x[1] - box.center[1]);
        return p_inf + amplitude * std::sin(phase);
    }
    double at_infinity() const override { return p_inf; }
};

struct TabulatedImpl final : ExponentField::Impl {
    Grid grid;
    std::vector<double> values;
    TabulatedImpl(const Grid& g, std::vector<double> v) : Impl(g.box), grid(g), values(std::move(v)) {}
    double eval(const Point& x) const override {
        const Rect b = box.rect();
        const int64_t n = grid.cells_per_side();
        const double h = grid.cell_size();
        int64_t ix = std::clamp<int64_t>(static_cast<int64_t>(std::floor((x[0] - b.lo[0]) / h)), 0, n - 1);
        int64_t flat = ix;
        if (box.dim == 2) {
            int64_t iy = std::clamp<int64_t>(static_cast<int64_t>(std::floor((x[1] - b.lo[1]) / h)), 0, n - 1);
            flat = iy * n + ix;
        }
        return values[static_cast<size_t>(flat)];
    }
    bool exact_extremes(const Rect& region, double& lo, double& hi) const override {
        // Extremes over the cells whose midpoints fall in the region.
        const Grid::CellRange r = grid.cells_in(region);
        if (r.empty()) return false;
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        const int64_t n = grid.cells_per_side();
        for (int64_t iy = r.lo[1]; iy <= r.hi[1]; ++iy) {
            for (int64_t ix = r.lo[0]; ix <= r.hi[0]; ++ix) {
                const double v = values[static_cast<size_t>(box.dim == 1 ? ix : iy * n + ix)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        return true;
    }
};

struct ConjugateImpl final : ExponentField::Impl {
    std::shared_ptr<const ExponentField::Impl> base;
    double base_minus, base_plus;
    ConjugateImpl(std::shared_ptr<const ExponentField::Impl> b, double bm, double bp)
        : Impl(b->box), base(std::move(b)), base_minus(bm), base_plus(bp) {}
    double eval(const Point& x) const override {
        const double p = base->eval(x);
        return p / (p - 1.0);
    }
    double at_infinity() const override {
        const double p = base->at_infinity();
        return p / (p - 1.0);
    }
};

struct ScaledImpl final : ExponentField::Impl {
    std::shared_ptr<const ExponentField::Impl> base;
    double c;
    ScaledImpl(std::shared_ptr<const ExponentField::Impl> b, double c_) : Impl(b->box), base(std::move(b)), c(c_) {}
    double eval(const Point& x) const override { return c * base->eval(x); }
    double at_infinity() const override { return c * base->at_infinity(); }
};

struct ReciprocalScaledImpl final : ExponentField::Impl {
    std::shared_ptr<const ExponentField::Impl> base;
    double c;
    ReciprocalScaledImpl(std::shared_ptr<const ExponentField::Impl> b, double c_)
        : Impl(b->box), base(std::move(b)), c(c_) {}
    double eval(const Point& x) const override { return c / base->eval(x); }
    double at_infinity() const override { return c / base->at_infinity(); }
};

struct CombinedImpl final : ExponentField::Impl {
    std::shared_ptr<const ExponentField::Impl> p, q;
    ExponentField::CombineMode mode;
    CombinedImpl(std::shared_ptr<const ExponentField::Impl> a,
                 std::shared_ptr<const ExponentField::Impl> b,
                 ExponentField::CombineMode m)
        : Impl(a->box), p(std::move(a)), q(std::move(b)), mode(m) {}
    static double apply(ExponentField::CombineMode mode, double pv, double qv) {
        switch (mode) {
            case ExponentField::CombineMode::Difference:
                return pv * qv / (qv - pv);
            case ExponentField::CombineMode::Sum:
                return pv * qv / (pv + qv);
            case ExponentField::CombineMode::Product:
                return pv * qv;
        }
        return 0.0;
    }
    double eval(const Point& x) const override { return apply(mode, p->eval(x), q->eval(x)); }
    double at_infinity() const override { return apply(mode, p->at_infinity(), q->at_infinity()); }
};

struct DeltaImpl final : ExponentField::Impl {
    std::shared_ptr<const ExponentField::Impl> r;
    double gamma;
    DeltaImpl(std::shared_ptr<const ExponentField::Impl> rr, double g)
        : Impl(rr->box), r(std::move(rr)), gamma(g) {}
    double eval(const Point& x) const override {
        return static_cast<double>(box.dim) * (1.0 / gamma - 1.0 / r->eval(x));
    }
    double at_infinity() const override {
        return static_cast<double>(box.dim) * (1.0 / gamma - 1.0 / r->at_infinity());
    }
};

// Dense deterministic sample of a region: subgrid midpoints plus subgrid
// nodes, so corners and edges are always represented.
template <typename F>
void sample_region(const Rect& region, int per_axis, F&& visit) {
    const int dim = region.dim;
    const int m = per_axis;
    if (dim == 1) {
        const double h = region.side(0) / m;
        for (int i = 0; i <= m; ++i) visit(Point{region.lo[0] + i * h, 0.0});
        for (int i = 0; i < m; ++i) visit(Point{region.lo[0] + (i + 0.5) * h, 0.0});
    } else {
        const double hx = region.side(0) / m;
        const double hy = region.side(1) / m;
        for (int iy = 0; iy <= m; ++iy) {
            for (int ix = 0; ix <= m; ++ix) {
                visit(Point{region.lo[0] + ix * hx, region.lo[1] + iy * hy});
            }
        }
        for (int iy = 0; iy < m; ++iy) {
            for (int ix = 0; ix < m; ++ix) {
                visit(Point{region.lo[0] + (ix + 0.5) * hx, region.lo[1] + (iy + 0.5) * hy});
            }
        }
    }
}

} // namespace

// ===== ExponentField =====

ExponentField::ExponentField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
    cache_extremes();
}

void ExponentField::cache_extremes() {
    const auto [lo, hi] = extremes(impl_->box.rect());
    p_minus_ = lo;
    p_plus_ = hi;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo >= 0.0)) {
        throw std::domain_error("ExponentField: field must be nonnegative, finite and bounded");
    }
}

std::pair<double, double> ExponentField::extremes(const Rect& region) const {
    double lo = 0.0, hi = 0.0;
    if (impl_->exact_extremes(region, lo, hi)) return {lo, hi};
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    const int per_axis = impl_->box.dim == 1 ? 4096 : 128;
    sample_region(region, per_axis, [&](const Point& x) {
        const double v = impl_->eval(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    });
    return {lo, hi};
}

ExponentField ExponentField::constant(const Box& box, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("ExponentField::constant: requires 0 <= value < infinity");
    }
    return ExponentField(std::make_shared<ConstantImpl>(box, value));
}

ExponentField ExponentField::affine(const Box& box, const Point& slope, double intercept,
                                    double lo, double hi) {
    if (!(lo >= 0.0) || !(hi >= lo)) {
        throw std::invalid_argument("ExponentField::affine: requires 0 <= lo <= hi");
    }
    return ExponentField(std::make_shared<AffineImpl>(box, slope, intercept, lo, hi));
}

ExponentField ExponentField::log_smooth(const Box& box, double p_inf, double amplitude) {
    if (!(amplitude >= 0.0) || !(p_inf - amplitude > 0.0)) {
        throw std::invalid_argument("ExponentField::log_smooth: requires 0 <= amplitude < p_inf");
    }
    return ExponentField(std::make_shared<LogSmoothImpl>(box, p_inf, amplitude));
}

ExponentField ExponentField::tabulated(const Grid& grid, std::vector<double> cell_values) {
    if (static_cast<int64_t>(cell_values.size()) != grid.cell_count()) {
        throw std::invalid_argument("ExponentField::tabulated: value count must equal grid cell count");
    }
    return ExponentField(std::make_shared<TabulatedImpl>(grid, std::move(cell_values)));
}

ExponentField ExponentField::tabulated(const Grid& grid, const std::function<double(const Point&)>& fn) {
    std::vector<double> v(static_cast<size_t>(grid.cell_count()));
    for (int64_t i = 0; i < grid.cell_count(); ++i) v[static_cast<size_t>(i)] = fn(grid.cell_midpoint(i));
    return tabulated(grid, std::move(v));
}

ExponentField ExponentField::conjugate() const {
    if (!(p_minus_ > 1.0)) {
        throw std::domain_error("ExponentField::conjugate: requires p_minus > 1");
    }
    ExponentField out(std::make_shared<ConjugateImpl>(impl_, p_minus_, p_plus_));
    // (p')^- = (p^+)' and (p')^+ = (p^-)': pin the cached extremes exactly.
    out.p_minus_ = p_plus_ / (p_plus_ - 1.0);
    out.p_plus_ = p_minus_ / (p_minus_ - 1.0);
    return out;
}

ExponentField ExponentField::scaled(double c, bool check_lower_bound) const {
    if (!(c > 0.0)) throw std::invalid_argument("ExponentField::scaled: requires c > 0");
    if (check_lower_bound && !(c >= 1.0 / p_minus_)) {
        throw std::domain_error("ExponentField::scaled: requires c >= 1/p_minus");
    }
    ExponentField out(std::make_shared<ScaledImpl>(impl_, c));
    out.p_minus_ = c * p_minus_;
    out.p_plus_ = c * p_plus_;
    return out;
}

ExponentField ExponentField::reciprocal_scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("ExponentField::reciprocal_scaled: requires c > 0");
    if (!(p_minus_ > 0.0)) throw std::domain_error("ExponentField::reciprocal_scaled: requires p_minus > 0");
    ExponentField out(std::make_shared<ReciprocalScaledImpl>(impl_, c));
    out.p_minus_ = c / p_plus_;
    out.p_plus_ = c / p_minus_;
    return out;
}

ExponentField ExponentField::combine(const ExponentField& p, const ExponentField& q, CombineMode mode) {
    if (p.box().dim != q.box().dim) {
        throw std::invalid_argument("ExponentField::combine: operand boxes must share a dimension");
    }
    if (mode == CombineMode::Difference) {
        // Reject p = q anywhere (beta would be infinite).
        double min_gap = std::numeric_limits<double>::infinity();
        const int per_axis = p.box().dim == 1 ? 4096 : 128;
        sample_region(p.box().rect(), per_axis, [&](const Point& x) {
            min_gap = std::min(min_gap, q(x) - p(x));
        });
        if (!(min_gap > 1e-12)) {
            throw std::domain_error(
                "ExponentField::combine(Difference): requires p < q pointwise (1/beta = 1/p - 1/q)");
        }
    }
    return ExponentField(std::make_shared<CombinedImpl>(p.impl_, q.impl_, mode));
}

double ExponentField::operator()(const Point& x) const { return impl_->eval(x); }

const Box& ExponentField::box() const { return impl_->box; }

double ExponentField::value_at_infinity() const {
    const double v = impl_->at_infinity();
    if (std::isfinite(v)) return v;
    // Fall back to the spatial mean over the box (diagnostic reference only).
    double sum = 0.0;
    int64_t count = 0;
    const int per_axis = impl_->box.dim == 1 ? 1024 : 64;
    sample_region(impl_->box.rect(), per_axis, [&](const Point& x) {
        sum += impl_->eval(x);
        ++count;
    });
    return sum / static_cast<double>(count);
}

bool ExponentField::is_constant() const { return impl_->constant() || p_minus_ == p_plus_; }

// ===== regularity =====

RegularityReport estimate_regularity(const ExponentField& p, int64_t pair_budget, uint64_t seed) {
    if (pair_budget < 1) throw std::invalid_argument("estimate_regularity: requires pair_budget >= 1");
    const Box& box = p.box();
    const Rect b = box.rect();
    const double a_inf = 1.0 / p.value_at_infinity();

    // Deterministic base points: subgrid midpoints + nodes.
    std::vector<Point> base;
    const int per_axis = box.dim == 1 ? 256 : 32;
    sample_region(b, per_axis, [&](const Point& x) { base.push_back(x); });

    RegularityReport rep;
    auto visit_pair = [&](const Point& x, const Point& y) {
        double d = 0.0;
        for (int a = 0; a < box.dim; ++a) d += (x[a] - y[a]) * (x[a] - y[a]);
        d = std::sqrt(d);
        if (d <= 0.0) return;
        const double px = p(x), py = p(y);
        const double lg = std::log(std::exp(1.0) + 1.0 / d);
        rep.local_logholder_constant =
            std::max(rep.local_logholder_constant, std::abs(1.0 / px - 1.0 / py) * lg);
        rep.loglog_constant =
            std::max(rep.loglog_constant, std::abs(px - py) * std::log(std::exp(1.0) + lg));
        ++rep.pair_count;
    };

    // Adjacent base-point pairs (small separations) first.
    for (size_t i = 0; i + 1 < base.size() && rep.pair_count < pair_budget; ++i) {
        visit_pair(base[i], base[i + 1]);
    }
    // Random pairs among base points until the budget is exhausted.
    uint64_t state = seed;
    const auto nbase = static_cast<uint64_t>(base.size());
    while (rep.pair_count < pair_budget) {
        const uint64_t i = splitmix64(state++) % nbase;
        const uint64_t j = splitmix64(state++) % nbase;
        if (i == j) continue;
        visit_pair(base[i], base[j]);
    }

    // Decay at infinity, evaluated on the deterministic base points.
    for (const Point& x : base) {
        const double lg = std::log(std::exp(1.0) + norm2(x, box.dim));
        rep.at_infinity_constant =
            std::max(rep.at_infinity_constant, std::abs(1.0 / p(x) - a_inf) * lg);
    }
    return rep;
}

// ===== delta exponent =====

ExponentField delta_exponent(double gamma, const ExponentField& r) {
    const int n = r.box().dim;
    if (!(gamma > 1.0)) throw std::domain_error("delta_exponent: requires gamma > 1");
    if (!(gamma <= r.p_minus())) {
        throw std::domain_error("delta_exponent: requires gamma <= r_minus");
    }
    if (gamma < static_cast<double>(n)) {
        const double upper = static_cast<double>(n) * gamma / (static_cast<double>(n) - gamma);
        if (!(r.p_plus() < upper)) {
            throw std::domain_error("delta_exponent: requires r_plus < n*gamma/(n-gamma)");
        }
    }
    ExponentField out(std::make_shared<DeltaImpl>(r.impl_, gamma));
    // delta is increasing in r, so the extremes follow r's exactly.
    out.p_minus_ = static_cast<double>(n) * (1.0 / gamma - 1.0 / r.p_minus());
    out.p_plus_ = static_cast<double>(n) * (1.0 / gamma - 1.0 / r.p_plus());
    return out;
}

} // namespace varlex
