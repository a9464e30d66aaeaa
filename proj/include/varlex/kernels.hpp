#pragma once

#include <utility>
#include <vector>

#include "varlex/geometry.hpp"

namespace varlex {

// Radial positive kernel K(x) = k(|x|) on R^n, n in {1,2}, locally integrable
// at the origin. Three profiles:
//   fractional:  k(r) = r^(a-n), 0 < a < n
//   bessel-like: k(r) = r^(b-n) e^(-lambda r), b > 0, lambda > 0
//   tabulated:   piecewise-linear interpolation of (radius, value) knots,
//                constant extension below the first and above the last knot
class Kernel {
public:
    enum class Profile { Fractional, BesselLike, Tabulated };

    static Kernel fractional(int dim, double a);
    static Kernel bessel_like(int dim, double b, double lambda);
    static Kernel tabulated(int dim, std::vector<std::pair<double, double>> knots);

    double value(double r) const;
    int dim() const { return dim_; }
    Profile profile() const { return profile_; }
    double order() const { return a_; } // a (fractional) or b (bessel-like)

    // K~(t) = integral of K over the ball |z| <= t. Closed form for the
    // fractional profile, Gauss-Legendre in the radial variable for the
    // bessel-like profile, exact piecewise-polynomial for tabulated.
    double ball_integral(double t) const;

    // Integral of K over the annulus inner < |z| <= outer, computed directly
    // on [inner, outer] so thin or far annuli are not lost to cancellation
    // between two nearly equal ball integrals.
    double annulus_integral(double inner, double outer) const;

    // Kbar(t) = sup over the annulus t < |z| <= 2t; exact for all profiles
    // (monotonicity / knot maxima).
    double annulus_sup(double t) const;

    bool radially_nonincreasing() const;

private:
    Kernel() = default;
    double radial_integral(double t) const; // integral_0^t k(r) r^(n-1) dr

    Profile profile_ = Profile::Fractional;
    int dim_ = 1;
    double a_ = 0.5;      // fractional exponent or bessel b
    double lambda_ = 1.0; // bessel decay
    std::vector<std::pair<double, double>> knots_;
};

// Spec-facing wrappers.
double k_tilde(const Kernel& k, double t);
double k_bar(const Kernel& k, double t);

// Radius of the ball with the measure of one grid cell: h/2 in 1-d,
// h/sqrt(pi) in 2-d. The singular self-cell of a discretized convolution is
// integrated over this ball.
double self_cell_radius(const Grid& grid);

// Dyadic-annulus comparison: for each k in [k_lo, k_hi], compare
//   lhs_k = sup_{2^k < |x| <= 2^{k+1}} K
//   rhs_k = 2^{-k n} * integral over { delta(1-eps) 2^k < |y| <= 2 delta(1+eps) 2^k } of K.
// The kernel belongs to the tested class when c = max_k lhs_k / rhs_k is finite.
struct ClassDReport {
    bool pass = false;
    double c_estimate = 0.0; // +infinity when some annulus has lhs > 0, rhs = 0
    double delta = 1.0;
    double eps = 0.0;
    int k_lo = 0;
    int k_hi = 0;
    std::vector<double> lhs; // per k
    std::vector<double> rhs; // per k
};

ClassDReport check_class_d(const Kernel& kernel, double delta, double eps, int k_lo, int k_hi);

// T^{b,m} f(x) = integral (b(x)-b(y))^m K(x-y) f(y) dy, midpoint quadrature
// over grid cells. The singular self-cell uses the exact ball integral of K
// over an equal-measure ball (m = 0; the (b(x)-b(y))^m factor kills the
// self-cell for m >= 1). m = 0 is the plain potential operator.
GridFunction apply_commutator(const Kernel& kernel, const GridFunction& b, int m,
                              const GridFunction& f, int jobs = 1);

} // namespace varlex
