#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"

namespace varlex {

// Generalized power-log integrand phi(x,t) = t^alpha(x) * (log(e+t))^theta(x)
// with 0 < alpha^- <= alpha^+ < infinity and theta >= 0. phi(x,0) = 0 and
// phi(x,.) is continuous and strictly increasing, so generalized inverses are
// plain inverses computed by bracketing + bisection.
class GPhiFunction {
public:
    GPhiFunction(ExponentField alpha, ExponentField theta);

    // t^p(x)  (theta identically zero)
    static GPhiFunction power(const ExponentField& p);
    static GPhiFunction power_log(const ExponentField& alpha, const ExponentField& theta);
    // t  -> Luxemburg norm degenerates to the L^1 norm; cube norm ratios
    // become plain averages.
    static GPhiFunction identity(const Box& box);

    double operator()(const Point& x, double t) const;
    double alpha_at(const Point& x) const { return alpha_(x); }
    double theta_at(const Point& x) const { return theta_(x); }
    const ExponentField& alpha() const { return alpha_; }
    const ExponentField& theta() const { return theta_; }
    const Box& box() const { return alpha_.box(); }

    bool theta_zero() const { return theta_zero_; }
    bool constant_power() const { return theta_zero_ && alpha_.is_constant(); }

    // inf{u >= 0 : phi(x,u) >= s}; stops when phi(x,u) is within rel. tol of s.
    // Exact closed form s^(1/alpha) when theta(x) = 0.
    double inverse(const Point& x, double s, double tol = 1e-12) const;

private:
    ExponentField alpha_;
    ExponentField theta_;
    bool theta_zero_;
};

// Fixed geometric t-grid used to evaluate conjugate functions as certified
// lower bounds: phi*(x,u) ~= max over grid t of (t u - phi(x,t)), never above
// the true supremum.
struct ConjugationGrid {
    std::vector<double> t;
    std::vector<double> log_t;        // log t
    std::vector<double> loglog_e_t;   // log log(e+t)

    static ConjugationGrid geometric(double t_min = 1e-8, double t_max = 1e8, int points = 400);
    int size() const { return static_cast<int>(t.size()); }
};

// Grid-sup conjugate value; includes t = 0 (so the result is >= 0).
double conjugate_value(const GPhiFunction& phi, const Point& x, double u, const ConjugationGrid& grid);

// phi(x,v) + phi*(x,u) - v*u, with the conjugate evaluated over grid ∪ {v} so
// the Young inequality holds to rounding precision by construction.
double young_defect(const GPhiFunction& phi, const Point& x, double v, double u,
                    const ConjugationGrid& grid);

// Generalized inverse of the grid-sup conjugate: inf{u: phi*(x,u) >= s}.
double conjugate_inverse(const GPhiFunction& phi, const Point& x, double s,
                         const ConjugationGrid& grid, double tol = 1e-10);

// A triple of integrands (A, B, D) used by multiplicative Hoelder-type checks:
// A^{-1}(x,t) B^{-1}(x,t) <~ D^{-1}(x,t) together with norm-product bounds.
struct PhiTriple {
    GPhiFunction A;
    GPhiFunction B;
    GPhiFunction D;
};

// Constructs the two built-in families of admissible triples.
//   which = 1:  A = t^{sigma p'(x)} (log(e+t))^{sigma p'(x)},
//               B = t^{(sigma p')'(x)},  D = t log(e+t);
//               requires sigma > (p')^+ / (p')^-.
//   which = 2:  A = t^{mu(x)} (log(e+t))^{nu(x) mu(x)},
//               B = t^{(sigma p')'(x)},
//               D = t^{a(x)} (log(e+t))^{a(x) nu(x)} with 1/a = 1/mu + 1/(sigma p')';
//               requires additionally 1/(sigma p'(x)) - 1/mu(x) > eps pointwise.
// Returns the (v-side, w-side) pair of triples (built identically).
std::pair<PhiTriple, PhiTriple> build_example_triple(
    int which, const ExponentField& p, double sigma,
    const std::optional<ExponentField>& mu = std::nullopt,
    const std::optional<ExponentField>& nu = std::nullopt,
    double eps = 0.05);

} // namespace varlex
