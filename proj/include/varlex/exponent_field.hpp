#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

#include "varlex/geometry.hpp"

namespace varlex {

// Bounded measurable exponent p(.) on a box. Immutable; derived fields
// (conjugate, combinations) share their operands. Global extremes are cached
// at construction from a dense sample that includes region corners, so
// monotone closed-form fields report exact extremes.
class ExponentField {
public:
    enum class CombineMode {
        Difference, // 1/beta = 1/p - 1/q, requires p < q pointwise
        Sum,        // 1/alpha = 1/p + 1/q
        Product     // alpha = p * q
    };

    ExponentField() = default;

    static ExponentField constant(const Box& box, double value);
    // p(x) = clamp(intercept + slope . x, lo, hi)
    static ExponentField affine(const Box& box, const Point& slope, double intercept,
                                double lo, double hi);
    // Smooth oscillation p(x) = p_inf + amplitude * sin(sum_a freq_a (x_a - center_a));
    // values stay in [p_inf - amplitude, p_inf + amplitude].
    static ExponentField log_smooth(const Box& box, double p_inf, double amplitude);
    // Piecewise constant on the cells of `grid`.
    static ExponentField tabulated(const Grid& grid, std::vector<double> cell_values);
    static ExponentField tabulated(const Grid& grid, const std::function<double(const Point&)>& fn);

    // p'(x) = p(x)/(p(x)-1); requires p_minus > 1. Extremes swap-invert exactly.
    ExponentField conjugate() const;
    // c * p(x); requires c >= 1/p_minus so that c*p stays >= 1 when p is a
    // Lebesgue exponent (callers working with general fields pass check=false).
    ExponentField scaled(double c, bool check_lower_bound = true) const;
    // c / p(x); requires p_minus > 0.
    ExponentField reciprocal_scaled(double c) const;
    static ExponentField combine(const ExponentField& p, const ExponentField& q, CombineMode mode);

    double operator()(const Point& x) const;
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    // inf/sup over a sub-region, from midpoint + node samples (corners included).
    std::pair<double, double> extremes(const Rect& region) const;

    const Box& box() const;
    // Reference value used by the decay-at-infinity diagnostic; exact for
    // constant and oscillation fields, spatial mean otherwise.
    double value_at_infinity() const;

    bool is_constant() const;
    bool valid() const { return impl_ != nullptr; }

    struct Impl;

private:
    explicit ExponentField(std::shared_ptr<const Impl> impl);
    void cache_extremes();

    friend ExponentField delta_exponent(double gamma, const ExponentField& r);

    std::shared_ptr<const Impl> impl_;
    double p_minus_ = 0.0;
    double p_plus_ = 0.0;
};

// Modulus-of-continuity estimates for an exponent field, reported as lower
// bounds obtained from sampled pairs (lattice midpoints plus random pairs).
struct RegularityReport {
    // sup |a(x)-a(y)| * log(e + 1/|x-y|) with a = 1/p  (local log-Hoelder)
    double local_logholder_constant = 0.0;
    // sup |a(x)-a_inf| * log(e + |x|) with a = 1/p
    double at_infinity_constant = 0.0;
    // sup |p(x)-p(y)| * log(e + log(e + 1/|x-y|))  (log-log modulus, on p itself)
    double loglog_constant = 0.0;
    int64_t pair_count = 0;
};

RegularityReport estimate_regularity(const ExponentField& p, int64_t pair_budget, uint64_t seed);

// delta(x) = n * (1/gamma - 1/r(x)); requires 1 < gamma <= r_minus and
// r_plus < n*gamma/(n-gamma) (no upper constraint when gamma >= n).
// Result takes values in [0, 1).
ExponentField delta_exponent(double gamma, const ExponentField& r);

} // namespace varlex
