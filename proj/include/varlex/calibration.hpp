#pragma once

#include <string>

namespace varlex {

// Frozen numerical envelopes used by the verification suite. Each value was
// measured on the reference configurations at desk scale and then widened by
// a safety margin; checks compare fresh measurements against these bounds, so
// silent regressions surface as failures rather than shifting baselines.
//
// Every field can be overridden from a key-table file whose path is given in
// the VARLEX_DEFAULTS environment variable (section [calibration], keys named
// exactly like the fields below).
struct Calibration {
    // Two-sided envelope for ||chi_Q||_p * ||chi_Q||_{p'} / |Q| over lattices.
    double product_bound_low = 0.25;
    double product_bound_high = 4.0;

    // Envelope for the measured/predicted ratio in the norm formula table.
    double formula_ratio_low = 0.125;
    double formula_ratio_high = 8.0;
    // Ceiling for the fitted |log slope| of that ratio against log|Q|.
    double formula_slope_tol = 0.05;

    // ||chi_{2Q}||_p <= doubling_bound * ||chi_Q||_p over lattice cubes.
    double doubling_bound = 4.0;

    // Envelope for ||chi_Q||_p/||chi_Q||_q versus ||chi_Q||_beta with
    // 1/beta = 1/p - 1/q.
    double embedding_equiv_low = 0.25;
    double embedding_equiv_high = 4.0;

    // sum_F ||chi_F f|| ||chi_F g|| <= disjoint_sum_bound * ||f|| ||g||.
    double disjoint_sum_bound = 8.0;

    // Depth-uniform bound for overlapping triple-cube sums below a fixed cube.
    double overlap_sum_bound = 64.0;

    // Localized kernel-sum comparison: lhs <= local_sum_bound * rhs.
    double local_sum_bound = 16.0;

    // ||chi_Q (b - b_Q)^k||_p / ||chi_Q||_p <= izuki_bound * osc^k where osc
    // is the mean-oscillation seminorm of b.
    double izuki_bound = 16.0;

    // |avg(b, 3Q) - avg(b, Q)| <= nested_gap_bound * a(Q) * seminorm(b).
    double nested_gap_bound = 8.0;

    // rho-averaged oscillation seminorm over the plain one lies in
    // [1, seminorm_equiv_high] (Jensen gives the lower end).
    double seminorm_equiv_high = 4.0;

    // ||chi_Q |f|^nu||_p^{1/nu-ish} comparison constant at nu = 1/2.
    double power_average_bound = 8.0;

    // Probe ceiling for the Orlicz maximal operator between designated spaces.
    double maximal_probe_bound = 32.0;

    // Stopping-time selection: measured nesting ratio that the scale factor
    // alpha must dominate for the packing estimate; default alpha used by the
    // sparse tooling when a config does not set one.
    double stopping_ctau = 2.0;
    double default_alpha = 4.0;

    static Calibration builtin();
    // builtin() plus overrides from `path` (section [calibration]).
    static Calibration from_file(const std::string& path);
    // builtin(), or from_file(getenv("VARLEX_DEFAULTS")) when the variable is
    // set; cached after the first call.
    static const Calibration& active();
};

} // namespace varlex
