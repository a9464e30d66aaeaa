#include "varlex/experiment.hpp"

#include "varlex/calibration.hpp"
#include "varlex/io.hpp"
#include "varlex/maximal.hpp"
#include "varlex/norm_formula.hpp"
#include "varlex/norms.hpp"
#include "varlex/parallel.hpp"
#include "varlex/random_fields.hpp"
#include "varlex/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

namespace varlex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// "Finite" upper bound: +infinity fails a check against this ceiling.
constexpr double kFiniteCeiling = std::numeric_limits<double>::max();

GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
    GridFunction out(a.grid);
    for (int64_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

GridFunction pointwise_abs(const GridFunction& a) {
    GridFunction out(a.grid);
    for (int64_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i]);
    return out;
}

// Appends a row `name, value, low, high, status` and a matching stdout line;
// the check passes when low <= value <= high (strict at the top when asked).
void add_check(Report& rep, RunOutcome& out, const std::string& name, double value, double low,
               double high, bool strict_high = false) {
    bool pass = value >= low && (strict_high ? value < high : value <= high);
    if (std::isnan(value)) pass = false;
    rep.add_row({name, format_number(value), format_number(low), format_number(high),
                 pass ? "pass" : "fail"});
    out.lines.push_back(std::string(pass ? "[PASS] " : "[FAIL] ") + name +
                        " value=" + format_number(value) + " range=[" + format_number(low) +
                        ", " + format_number(high) + (strict_high ? ")" : "]"));
    out.pass = out.pass && pass;
}

void ensure_out_dir(const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
}

std::string cube_label(const DyadicCube& q) {
    return std::to_string(q.level) + "/" + std::to_string(q.index[0]) + "," +
           std::to_string(q.index[1]) + (q.shifted ? "s" : "");
}

Point point_from_list(const Config& cfg, const std::string& section, const std::string& key) {
    const std::vector<double> c = cfg.get_doubles(section, key, {0.0, 0.0});
    if (c.empty() || c.size() > 2) {
        throw ConfigError(section + "." + key + ": expected 1 or 2 coordinates");
    }
    return Point{c[0], c.size() > 1 ? c[1] : 0.0};
}

} // namespace

// ==== builders ====

Box build_box(const Config& cfg) {
    Box box;
    box.dim = static_cast<int>(cfg.get_int("domain", "dim", 1));
    if (box.dim != 1 && box.dim != 2) {
        throw ConfigError("domain.dim: must be 1 or 2");
    }
    box.center = point_from_list(cfg, "domain", "center");
    box.half_width = cfg.get_double("domain", "half_width", 0.5);
    if (!(box.half_width > 0.0) || !std::isfinite(box.half_width)) {
        throw ConfigError("domain.half_width: must be positive and finite");
    }
    return box;
}

Grid build_grid(const Config& cfg) {
    const Box box = build_box(cfg);
    const int depth = static_cast<int>(cfg.require_int("domain", "grid_depth"));
    const int cap = box.dim == 1 ? 12 : 9;
    if (depth < 0 || depth > cap) {
        throw ConfigError("domain.grid_depth: must satisfy 0 <= depth <= " + std::to_string(cap) +
                          " for dim = " + std::to_string(box.dim));
    }
    return Grid{box, depth};
}

CubeLattice build_lattice(const Config& cfg, const Box& box, int default_j_max) {
    const int j_min = static_cast<int>(cfg.get_int("domain", "j_min", 0));
    const int j_max = static_cast<int>(cfg.get_int("domain", "j_max", default_j_max));
    const int shifted = static_cast<int>(cfg.get_int("domain", "shifted_per_level", 0));
    const auto shift_seed = static_cast<uint64_t>(cfg.get_int("domain", "shift_seed", 1));
    if (j_min < 0) throw ConfigError("domain.j_min: must be >= 0");
    if (j_max < j_min) throw ConfigError("domain.j_max: must be >= domain.j_min");
    if (j_max > 24) throw ConfigError("domain.j_max: must be <= 24");
    if (shifted < 0) throw ConfigError("domain.shifted_per_level: must be >= 0");
    return CubeLattice(box, j_min, j_max, shifted, shift_seed);
}

ExponentField build_exponent(const Config& cfg, const std::string& section, const Box& box,
                             const std::string& prefix) {
    if (!cfg.has_section(section)) {
        throw ConfigError("missing required section [" + section + "]");
    }
    const std::string what = section + "." + prefix;
    const std::string kind = cfg.get_string(section, prefix + "kind", "constant");
    if (kind == "constant") {
        const double value = cfg.get_double(section, prefix + "value", 2.0);
        return ExponentField::constant(box, value);
    }
    if (kind == "affine") {
        const Point slope = point_from_list(cfg, section, prefix + "slope");
        const double intercept = cfg.get_double(section, prefix + "intercept", 2.0);
        const double lo = cfg.get_double(section, prefix + "lo", 1.0);
        const double hi = cfg.get_double(section, prefix + "hi", 10.0);
        return ExponentField::affine(box, slope, intercept, lo, hi);
    }
    if (kind == "log_smooth") {
        const double p_inf = cfg.require_double(section, prefix + "p_inf");
        const double amplitude = cfg.require_double(section, prefix + "amplitude");
        return ExponentField::log_smooth(box, p_inf, amplitude);
    }
    throw ConfigError(what + "kind: unknown exponent kind '" + kind + "'");
}

Kernel build_kernel(const Config& cfg, int dim) {
    const std::string kind = cfg.get_string("kernel", "kind", "fractional");
    if (kind == "fractional") {
        return Kernel::fractional(dim, cfg.get_double("kernel", "a", 0.5));
    }
    if (kind == "bessel") {
        return Kernel::bessel_like(dim, cfg.get_double("kernel", "b", 0.5),
                                   cfg.get_double("kernel", "lambda", 1.0));
    }
    if (kind == "tabulated") {
        const std::vector<double> radii = cfg.require_doubles("kernel", "radii");
        const std::vector<double> values = cfg.require_doubles("kernel", "values");
        if (radii.size() != values.size()) {
            throw ConfigError("kernel.radii and kernel.values: lengths must match");
        }
        std::vector<std::pair<double, double>> knots;
        knots.reserve(radii.size());
        for (size_t i = 0; i < radii.size(); ++i) knots.emplace_back(radii[i], values[i]);
        return Kernel::tabulated(dim, std::move(knots));
    }
    throw ConfigError("kernel.kind: unknown kernel kind '" + kind + "'");
}

GridFunction build_symbol(const Config& cfg, const Grid& grid) {
    const std::string kind = cfg.get_string("symbol", "kind", "holder");
    const double scale = cfg.get_double("symbol", "scale", 1.0);
    GridFunction b;
    if (kind == "holder") {
        const double delta = cfg.get_double("symbol", "delta", 1.0);
        const auto seed = static_cast<uint64_t>(cfg.get_int("symbol", "seed", 7));
        b = random_holder_symbol(grid, delta, seed);
    } else if (kind == "constant") {
        b = GridFunction(grid, cfg.get_double("symbol", "value", 1.0));
    } else if (kind == "power_distance") {
        const double exponent = cfg.require_double("symbol", "exponent");
        b = power_weight(grid, exponent, point_from_list(cfg, "symbol", "center"));
    } else {
        throw ConfigError("symbol.kind: unknown symbol kind '" + kind + "'");
    }
    if (scale != 1.0) {
        for (double& v : b.values) v *= scale;
    }
    return b;
}

CubeFunctional build_functional(const Config& cfg, const Box& box, int dim) {
    const std::string kind = cfg.get_string("functional", "kind", "one");
    if (kind == "one") return CubeFunctional::one();
    if (kind == "power") {
        return CubeFunctional::power(dim, cfg.require_double("functional", "delta"));
    }
    if (kind == "variable") {
        const ExponentField delta = build_exponent(cfg, "delta", box);
        const int subdiv = static_cast<int>(cfg.get_int("functional", "subdiv", 64));
        return CubeFunctional::variable_norm(delta, subdiv);
    }
    throw ConfigError("functional.kind: unknown cube functional kind '" + kind + "'");
}

WeightPair build_weights(const Config& cfg, const Grid& grid) {
    const std::string kind = cfg.get_string("weights", "kind", "unit");
    if (kind == "unit") {
        return WeightPair{GridFunction(grid, 1.0), GridFunction(grid, 1.0)};
    }
    if (kind == "power") {
        const double ve = cfg.get_double("weights", "v_exponent", 0.0);
        const double we = cfg.get_double("weights", "w_exponent", 0.0);
        return WeightPair{power_weight(grid, ve, point_from_list(cfg, "weights", "v_center")),
                          power_weight(grid, we, point_from_list(cfg, "weights", "w_center"))};
    }
    if (kind == "random") {
        const double spread = cfg.get_double("weights", "spread", 4.0);
        const auto vs = static_cast<uint64_t>(cfg.get_int("weights", "v_seed", 11));
        const auto ws = static_cast<uint64_t>(cfg.get_int("weights", "w_seed", 12));
        return WeightPair{random_weight(grid, spread, vs), random_weight(grid, spread, ws)};
    }
    throw ConfigError("weights.kind: unknown weight kind '" + kind + "'");
}

ProofExponents derive_proof_exponents(const ExponentField& p, const ExponentField& q, double R,
                                      double S) {
    ProofExponents out;
    out.s = p.conjugate().scaled(R);
    out.l = q.scaled(S);
    const ExponentField s_conj = out.s.conjugate();
    const double q_plus_conj = q.p_plus() / (q.p_plus() - 1.0);
    if (!(s_conj.p_plus() < p.p_minus())) {
        throw std::invalid_argument(
            "derive_proof_exponents: requires (s')^+ < p^- with s = R p' (increase R)");
    }
    if (!(out.l.conjugate().p_plus() < q_plus_conj)) {
        throw std::invalid_argument(
            "derive_proof_exponents: requires (l')^+ < (q^+)' with l = S q (increase S)");
    }
    out.mu = 0.5 * (s_conj.p_plus() + p.p_minus());
    out.nu = 0.5 * (out.l.conjugate().p_plus() + q_plus_conj);
    const Box& box = p.box();
    out.omega = ExponentField::combine(out.s, ExponentField::constant(box, out.mu),
                                       ExponentField::CombineMode::Sum);
    out.tau = ExponentField::combine(out.l, ExponentField::constant(box, out.nu),
                                     ExponentField::CombineMode::Sum);
    return out;
}

// ==== norm ====

RunOutcome run_norm(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const Grid grid = build_grid(cfg);
    const ExponentField p = build_exponent(cfg, "p", grid.box);
    const ExponentField theta = cfg.has_section("log_exponent")
                                    ? build_exponent(cfg, "log_exponent", grid.box)
                                    : ExponentField::constant(grid.box, 0.0);
    const GPhiFunction phi = GPhiFunction::power_log(p, theta);

    GridFunction f;
    const std::string input = cfg.get_string("norm", "input", "");
    if (!input.empty()) {
        f = read_grid_function(input);
        if (!(f.grid == grid)) {
            throw ConfigError("norm.input: grid in '" + input + "' does not match [domain]");
        }
    } else {
        const CubeLattice lattice = build_lattice(cfg, grid.box, grid.depth);
        f = random_test_function(grid, lattice, splitmix64(opt.seed));
    }

    const double tol = cfg.get_double("norm", "tolerance", 1e-10);
    const NormResult r = luxemburg_norm(phi, f, tol);

    Report rep("norm", {"quantity", "value"});
    rep.summary("seed", static_cast<int64_t>(opt.seed));
    rep.add_row({"norm", format_number(r.value)});
    rep.add_row({"modular_at_norm", format_number(r.modular_at_value)});
    rep.add_row({"iterations", format_integer(r.iterations)});
    rep.add_row({"bracket_low", format_number(r.bracket_lo)});
    rep.add_row({"bracket_high", format_number(r.bracket_hi)});

    out.pass = std::isfinite(r.value);
    out.lines.push_back(std::string(out.pass ? "[PASS] " : "[FAIL] ") +
                        "luxemburg_norm value=" + format_number(r.value) +
                        " modular=" + format_number(r.modular_at_value));
    ensure_out_dir(opt);
    out.files.push_back(rep.write_file(opt.out_dir, "norm_report", opt.format));
    return out;
}

// ==== check-kernel ====

RunOutcome run_check_kernel(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const int dim = static_cast<int>(cfg.get_int("domain", "dim", 1));
    if (dim != 1 && dim != 2) throw ConfigError("domain.dim: must be 1 or 2");
    const Kernel kernel = build_kernel(cfg, dim);
    const double delta = cfg.get_double("check_kernel", "delta", 1.0);
    const double eps = cfg.get_double("check_kernel", "eps", 0.0);
    const int k_lo = static_cast<int>(cfg.get_int("check_kernel", "k_lo", -10));
    const int k_hi = static_cast<int>(cfg.get_int("check_kernel", "k_hi", 10));
    if (!(delta > 0.0)) throw ConfigError("check_kernel.delta: must satisfy delta > 0");
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw ConfigError("check_kernel.eps: must satisfy 0 <= eps < 1");
    }
    if (k_lo > k_hi) throw ConfigError("check_kernel.k_lo: must be <= check_kernel.k_hi");

    const ClassDReport rep = check_class_d(kernel, delta, eps, k_lo, k_hi);

    Report table("check_kernel", {"k", "annulus_sup", "scaled_mass", "ratio"});
    table.summary("delta", delta);
    table.summary("eps", eps);
    table.summary("c_estimate", rep.c_estimate);
    table.summary_flag("pass", rep.pass);
    for (size_t i = 0; i < rep.lhs.size(); ++i) {
        const double ratio = rep.rhs[i] > 0.0 ? rep.lhs[i] / rep.rhs[i]
                                              : (rep.lhs[i] > 0.0 ? kInf : 0.0);
        table.add_row({format_integer(k_lo + static_cast<int64_t>(i)), format_number(rep.lhs[i]),
                       format_number(rep.rhs[i]), format_number(ratio)});
    }
    out.pass = rep.pass;
    out.lines.push_back(std::string(rep.pass ? "[PASS] " : "[FAIL] ") +
                        "kernel_annulus_comparison c=" + format_number(rep.c_estimate) +
                        " k_range=[" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + "]");
    ensure_out_dir(opt);
    out.files.push_back(table.write_file(opt.out_dir, "kernel_report", opt.format));
    return out;
}

// ==== certify ====

namespace {

GPhiFunction build_bump(const Config& cfg, const std::string& section, const Box& box,
                        const ExponentField& fallback_alpha) {
    if (!cfg.has_section(section)) return GPhiFunction::power(fallback_alpha);
    const ExponentField alpha = build_exponent(cfg, section, box, "alpha_");
    const ExponentField theta = cfg.has(section, "theta_kind") || cfg.has(section, "theta_value")
                                    ? build_exponent(cfg, section, box, "theta_")
                                    : ExponentField::constant(box, 0.0);
    return GPhiFunction::power_log(alpha, theta);
}

FPReport certify_report(const Config& cfg, const Grid& grid, const CubeLattice& lattice,
                        int theorem, const RunOptions& opt) {
    const ExponentField p = build_exponent(cfg, "p", grid.box);
    const ExponentField q = build_exponent(cfg, "q", grid.box);
    const Kernel kernel = build_kernel(cfg, grid.box.dim);
    const WeightPair weights = build_weights(cfg, grid);
    const int m = static_cast<int>(cfg.get_int("certify", "m", cfg.get_int("symbol", "m", 0)));
    const bool shifted = cfg.get_bool("certify", "include_shifted", true);
    const double tol = cfg.get_double("certify", "tolerance", 1e-10);
    if (theorem == 11) {
        const double R = cfg.get_double("certify", "R", 2.0);
        const double S = cfg.get_double("certify", "S", 2.0);
        const CubeFunctional a = build_functional(cfg, grid.box, grid.box.dim);
        return fefferman_phong_thm11(p, q, R, S, a, m, kernel, weights, lattice, shifted, tol,
                                     opt.jobs);
    }
    const double R = cfg.get_double("certify", "R", 2.0);
    const double S = cfg.get_double("certify", "S", 2.0);
    const GPhiFunction A = build_bump(cfg, "bump_a", grid.box, p.conjugate().scaled(R));
    const GPhiFunction E = build_bump(cfg, "bump_e", grid.box, q.scaled(S));
    const ExponentField delta = m >= 1 || cfg.has_section("delta")
                                    ? build_exponent(cfg, "delta", grid.box)
                                    : ExponentField::constant(grid.box, 0.5);
    return fefferman_phong_thm12(p, q, delta, m, kernel, A, E, weights, lattice, shifted, tol,
                                 opt.jobs);
}

void fill_fp_table(Report& table, const FPReport& rep) {
    for (const FPRow& row : rep.rows) {
        table.add_row({format_integer(row.cube.level), format_integer(row.cube.index[0]),
                       format_integer(row.cube.index[1]), row.cube.shifted ? "true" : "false",
                       format_number(row.symbol_factor), format_number(row.kernel_factor),
                       format_number(row.embedding_factor), format_number(row.v_factor),
                       format_number(row.w_factor), format_number(row.product)});
    }
}

} // namespace

RunOutcome run_certify(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const Grid grid = build_grid(cfg);
    const CubeLattice lattice = build_lattice(cfg, grid.box, grid.depth);
    const int theorem = static_cast<int>(cfg.get_int("certify", "theorem", 11));
    if (theorem != 11 && theorem != 12) {
        throw ConfigError("certify.theorem: must be 11 or 12");
    }
    const double bound = cfg.get_double("certify", "bound", kInf);

    const FPReport rep = certify_report(cfg, grid, lattice, theorem, opt);

    Report table("certify", {"level", "ix", "iy", "shifted", "symbol_factor", "kernel_factor",
                             "embedding_factor", "v_factor", "w_factor", "product"});
    table.summary("theorem_form", theorem == 11 ? "power_bump" : "orlicz_bump");
    table.summary("kappa", rep.kappa);
    table.summary("worst_cube", cube_label(rep.worst_cube));
    table.summary("cube_count", static_cast<int64_t>(rep.rows.size()));
    fill_fp_table(table, rep);

    out.pass = std::isfinite(rep.kappa) && rep.kappa <= bound;
    out.lines.push_back(std::string(out.pass ? "[PASS] " : "[FAIL] ") +
                        "testing_condition kappa=" + format_number(rep.kappa) + " bound=" +
                        format_number(bound) + " worst_cube=" + cube_label(rep.worst_cube));
    ensure_out_dir(opt);
    out.files.push_back(table.write_file(opt.out_dir, "certify_report", opt.format));
    return out;
}

// ==== formula ====

RunOutcome run_formula(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const Box box = build_box(cfg);
    const int j_min = static_cast<int>(cfg.get_int("formula", "j_min", 0));
    const int j_max = static_cast<int>(cfg.get_int("formula", "j_max", 12));
    if (j_min < 0 || j_max < j_min || j_max > 24) {
        throw ConfigError("formula.j_min/j_max: need 0 <= j_min <= j_max <= 24");
    }
    const CubeLattice lattice(box, j_min, j_max);
    const ExponentField p = build_exponent(cfg, "p", box);
    const ExponentField theta = cfg.has_section("log_exponent")
                                    ? build_exponent(cfg, "log_exponent", box)
                                    : ExponentField::constant(box, 0.0);
    const int per_level = static_cast<int>(cfg.get_int("formula", "per_level", 8));
    const int subdiv = static_cast<int>(cfg.get_int("formula", "subdiv", 256));
    const double tol = cfg.get_double("formula", "tolerance", 1e-10);

    const FormulaTable table = verify_norm_formula(p, theta, lattice, per_level, subdiv, tol,
                                                   opt.jobs);
    const LemmaChainReport chain = verify_lemma_chain(p, theta, lattice, per_level, subdiv, tol,
                                                      opt.jobs);
    const Calibration& cal = Calibration::active();

    Report rep("formula", {"check", "value", "low", "high", "status"});
    rep.summary("cube_count", static_cast<int64_t>(table.rows.size()));
    rep.summary("min_ratio", table.min_ratio);
    rep.summary("max_ratio", table.max_ratio);
    rep.summary("log_slope", table.log_slope);
    add_check(rep, out, "formula_ratio_min", table.min_ratio, cal.formula_ratio_low, kInf);
    add_check(rep, out, "formula_ratio_max", table.max_ratio, 0.0, cal.formula_ratio_high);
    add_check(rep, out, "formula_log_slope_abs", std::abs(table.log_slope), 0.0,
              cal.formula_slope_tol);
    add_check(rep, out, "log_factor_cube_oscillation", chain.log_power_osc_bound, 0.0,
              kFiniteCeiling);
    add_check(rep, out, "inverse_of_averaged_exponents", chain.inverse_average_bound, 0.0,
              kFiniteCeiling);
    add_check(rep, out, "two_factor_inverse_split", chain.two_factor_bound, 0.0, kFiniteCeiling);
    add_check(rep, out, "cube_average_vs_indicator_norm", chain.average_vs_norm_bound, 0.0,
              kFiniteCeiling);

    Report cubes("formula_cubes",
                 {"level", "ix", "iy", "measure", "measured", "predicted", "ratio"});
    for (const FormulaRow& row : table.rows) {
        cubes.add_row({format_integer(row.cube.level), format_integer(row.cube.index[0]),
                       format_integer(row.cube.index[1]), format_number(row.cube_measure),
                       format_number(row.measured), format_number(row.predicted),
                       format_number(row.ratio)});
    }

    ensure_out_dir(opt);
    out.files.push_back(rep.write_file(opt.out_dir, "formula_report", opt.format));
    out.files.push_back(cubes.write_file(opt.out_dir, "formula_cubes", opt.format));
    return out;
}

// ==== sparse ====

RunOutcome run_sparse(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const Grid grid = build_grid(cfg);
    const CubeLattice lattice = build_lattice(cfg, grid.box, grid.depth);
    const Calibration& cal = Calibration::active();

    ExponentField tau;
    if (cfg.has_section("tau")) {
        tau = build_exponent(cfg, "tau", grid.box);
    } else {
        const ExponentField p = build_exponent(cfg, "p", grid.box);
        const ExponentField q = build_exponent(cfg, "q", grid.box);
        const double R = cfg.get_double("sparse", "R", 2.0);
        const double S = cfg.get_double("sparse", "S", 2.0);
        tau = derive_proof_exponents(p, q, R, S).tau;
    }
    const double alpha = cfg.get_double("sparse", "alpha", cal.default_alpha);
    const double tol = cfg.get_double("sparse", "tolerance", 1e-10);

    const GridFunction g = random_test_function(grid, lattice, splitmix64(opt.seed));
    const WeightPair weights = build_weights(cfg, grid);
    const GridFunction gw = pointwise_product(g, weights.w);
    const std::vector<double> values = norm_ratio_values(tau, gw, lattice, tol, opt.jobs);
    const StoppingFamily family = build_stopping_family(values, alpha, lattice);

    Report rep("sparse", {"threshold", "level", "ix", "iy", "cube_value", "next_overlap",
                          "residual"});
    rep.summary("alpha", alpha);
    rep.summary("k_lo", static_cast<int64_t>(family.k_lo));
    rep.summary("k_hi", static_cast<int64_t>(family.k_hi));
    rep.summary("packing_constant", family.packing_constant);
    rep.summary_flag("packing_ok", family.packing_ok);
    rep.summary("positive_count", family.positive_count);
    rep.summary("seed", static_cast<int64_t>(opt.seed));

    bool measure_ok = true;
    int64_t selected = 0;
    for (int k = family.k_lo; k <= family.k_hi; ++k) {
        for (const StoppingEntry& e : family.at(k)) {
            rep.add_row({format_integer(k), format_integer(e.cube.level),
                         format_integer(e.cube.index[0]), format_integer(e.cube.index[1]),
                         format_number(e.g_value), format_number(e.intersection_measure),
                         format_number(e.residual_measure)});
            ++selected;
            if (family.packing_ok) {
                const double lower = (1.0 - family.packing_constant / alpha) * e.cube.measure();
                measure_ok = measure_ok && e.residual_measure >= lower;
            }
        }
    }
    rep.summary("selected_count", selected);

    out.pass = family.packing_ok && measure_ok;
    out.lines.push_back(std::string(family.packing_ok ? "[PASS] " : "[FAIL] ") +
                        "stopping_packing constant=" + format_number(family.packing_constant) +
                        " alpha=" + format_number(alpha));
    out.lines.push_back(std::string(measure_ok ? "[PASS] " : "[FAIL] ") +
                        "stopping_residual_measure selected=" + format_integer(selected));
    ensure_out_dir(opt);
    out.files.push_back(rep.write_file(opt.out_dir, "sparse_report", opt.format));
    return out;
}

// ==== verify ====

namespace {

struct TrialRow {
    uint64_t seed = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

} // namespace

RunOutcome run_verify(const std::string& theorem, const Config& cfg, const RunOptions& opt) {
    if (theorem != "1.1" && theorem != "1.2") {
        throw ConfigError("verify: theorem must be 1.1 or 1.2");
    }
    RunOutcome out;
    const Grid grid = build_grid(cfg);
    const CubeLattice lattice = build_lattice(cfg, grid.box, grid.depth);
    const ExponentField p = build_exponent(cfg, "p", grid.box);
    const ExponentField q = build_exponent(cfg, "q", grid.box);
    const Kernel kernel = build_kernel(cfg, grid.box.dim);
    const WeightPair weights = build_weights(cfg, grid);
    const GridFunction b = build_symbol(cfg, grid);
    const int m = static_cast<int>(cfg.get_int("symbol", "m", 0));
    const double rho = cfg.get_double("symbol", "rho", 1.0);
    const bool shifted = cfg.get_bool("certify", "include_shifted", true);
    const double tol = cfg.get_double("verify", "tolerance", 1e-10);
    const auto trials = static_cast<int64_t>(cfg.get_int("verify", "trials", 200));
    if (trials < 1) throw ConfigError("verify.trials: must be >= 1");
    const double bound = cfg.require_double("verify", "bound");

    // Certify the testing condition first; an unbounded kappa means the
    // hypothesis side fails and no trial can be normalized.
    double kappa = 0.0;
    if (theorem == "1.1") {
        const double R = cfg.get_double("certify", "R", 2.0);
        const double S = cfg.get_double("certify", "S", 2.0);
        const CubeFunctional a = build_functional(cfg, grid.box, grid.box.dim);
        kappa = fefferman_phong_thm11(p, q, R, S, a, m, kernel, weights, lattice, shifted, tol,
                                      opt.jobs)
                    .kappa;
    } else {
        kappa = certify_report(cfg, grid, lattice, 12, opt).kappa;
    }

    Report rep("verify", {"trial", "seed", "numerator", "denominator", "ratio"});
    rep.summary("theorem", theorem);
    rep.summary("kappa", kappa);
    rep.summary("trials", trials);
    rep.summary("seed", static_cast<int64_t>(opt.seed));

    if (!std::isfinite(kappa) || kappa <= 0.0) {
        out.pass = false;
        out.lines.push_back("[FAIL] testing_condition kappa=" + format_number(kappa) +
                            " (finite positive value required before trials)");
        ensure_out_dir(opt);
        out.files.push_back(rep.write_file(opt.out_dir, "verify_report", opt.format));
        return out;
    }

    // Symbol-size factor: the oscillation seminorm power for the first form,
    // absent from the second.
    double symbol_size = 1.0;
    if (theorem == "1.1" && m >= 1) {
        const CubeFunctional a = build_functional(cfg, grid.box, grid.box.dim);
        symbol_size = std::pow(lipschitz_seminorm(b, a, rho, lattice, shifted, opt.jobs).seminorm,
                               m);
        rep.summary("symbol_seminorm_power", symbol_size);
    }

    // Extra boundedness probes for the second form: plain and fractional
    // maximal operators between the designated spaces.
    if (theorem == "1.2") {
        const auto probe_trials = static_cast<int>(cfg.get_int("verify", "probe_trials", 10));
        const double probe_bound =
            cfg.get_double("verify", "probe_bound", Calibration::active().maximal_probe_bound);
        const MaximalSpec plain{GPhiFunction::power(p), std::nullopt, false, tol};
        const double plain_ratio = boundedness_probe(plain, lattice, grid, p, p, probe_trials,
                                                     splitmix64(opt.seed ^ 0x5e41c883u),
                                                     opt.jobs);
        const ExponentField beta =
            ExponentField::combine(p, q, ExponentField::CombineMode::Difference);
        const MaximalSpec frac{GPhiFunction::power(q.conjugate()), beta, false, tol};
        const double frac_ratio =
            boundedness_probe(frac, lattice, grid, q.conjugate(), p.conjugate(), probe_trials,
                              splitmix64(opt.seed ^ 0x77f0a2d1u), opt.jobs);
        rep.summary("plain_maximal_probe", plain_ratio);
        rep.summary("fractional_maximal_probe", frac_ratio);
        const bool probes_ok = plain_ratio <= probe_bound && frac_ratio <= probe_bound;
        out.lines.push_back(std::string(probes_ok ? "[PASS] " : "[FAIL] ") +
                            "maximal_probes plain=" + format_number(plain_ratio) +
                            " fractional=" + format_number(frac_ratio) +
                            " bound=" + format_number(probe_bound));
        out.pass = out.pass && probes_ok;
    }

    std::vector<TrialRow> rows(static_cast<size_t>(trials));
    const double denom_scale = kappa * symbol_size;
    parallel_for(trials, opt.jobs, [&](int64_t t) {
        TrialRow& row = rows[static_cast<size_t>(t)];
        // Mix the run seed before indexing so adjacent seeds do not produce
        // overlapping trial windows.
        row.seed = splitmix64(splitmix64(opt.seed) + static_cast<uint64_t>(t));
        const GridFunction f = random_test_function(grid, lattice, row.seed);
        const GridFunction tf = apply_commutator(kernel, b, m, f, 1);
        row.numerator = weighted_norm(q, pointwise_abs(tf), weights.w, tol).value;
        row.denominator = denom_scale * weighted_norm(p, f, weights.v, tol).value;
        row.ratio = row.numerator == 0.0
                        ? 0.0
                        : (row.denominator > 0.0 ? row.numerator / row.denominator : kInf);
    });

    double max_ratio = 0.0;
    for (int64_t t = 0; t < trials; ++t) {
        const TrialRow& row = rows[static_cast<size_t>(t)];
        rep.add_row({format_integer(t), format_integer(static_cast<int64_t>(row.seed)),
                     format_number(row.numerator), format_number(row.denominator),
                     format_number(row.ratio)});
        max_ratio = std::max(max_ratio, row.ratio);
    }
    rep.summary("max_ratio", max_ratio);
    rep.summary("bound", bound);
    const bool ratio_ok = max_ratio <= bound;
    rep.summary_flag("pass", ratio_ok && out.pass);
    out.pass = out.pass && ratio_ok;
    out.lines.push_back(std::string(ratio_ok ? "[PASS] " : "[FAIL] ") +
                        "normalized_operator_ratio max=" + format_number(max_ratio) +
                        " bound=" + format_number(bound) + " kappa=" + format_number(kappa));

    ensure_out_dir(opt);
    out.files.push_back(rep.write_file(opt.out_dir, "verify_report", opt.format));
    return out;
}

// ==== suite ====

RunOutcome run_suite(const Config& cfg, const RunOptions& opt) {
    RunOutcome out;
    const Calibration& cal = Calibration::active();
    const Grid grid = build_grid(cfg);
    const Box& box = grid.box;
    const CubeLattice lattice = build_lattice(cfg, box, grid.depth);
    const ExponentField p = build_exponent(cfg, "p", box);
    const ExponentField q = build_exponent(cfg, "q", box);
    const ExponentField theta = cfg.has_section("log_exponent")
                                    ? build_exponent(cfg, "log_exponent", box)
                                    : ExponentField::constant(box, 0.0);
    const Kernel kernel = build_kernel(cfg, box.dim);
    const WeightPair weights = build_weights(cfg, grid);
    const GridFunction b = build_symbol(cfg, grid);
    const CubeFunctional a = build_functional(cfg, box, box.dim);
    const double R = cfg.get_double("suite", "R", 2.0);
    const double S = cfg.get_double("suite", "S", 2.0);
    const double tol = 1e-10;

    Report rep("suite", {"check", "value", "low", "high", "status"});
    rep.summary("seed", static_cast<int64_t>(opt.seed));

    const std::vector<DyadicCube> all_cubes = lattice.cubes(true);
    const GPhiFunction phi_p = GPhiFunction::power(p);
    const GPhiFunction phi_pc = GPhiFunction::power(p.conjugate());
    const GPhiFunction phi_q = GPhiFunction::power(q);

    // Indicator norms multiply against their conjugates like the measure.
    {
        double lo = kInf, hi = 0.0;
        std::vector<double> vals(all_cubes.size());
        parallel_for(static_cast<int64_t>(all_cubes.size()), opt.jobs, [&](int64_t i) {
            const DyadicCube& cube = all_cubes[static_cast<size_t>(i)];
            const double np = chi_norm_on_grid(phi_p, grid, cube.rect, tol).value;
            const double nc = chi_norm_on_grid(phi_pc, grid, cube.rect, tol).value;
            const double meas = region_measure(grid, cube.rect);
            vals[static_cast<size_t>(i)] = meas > 0.0 ? np * nc / meas : 1.0;
        });
        for (double v : vals) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        add_check(rep, out, "indicator_conjugate_product_min", lo, cal.product_bound_low, kInf);
        add_check(rep, out, "indicator_conjugate_product_max", hi, 0.0, cal.product_bound_high);
    }

    // Doubling of indicator norms under cube dilation.
    {
        std::vector<double> vals(all_cubes.size(), 0.0);
        parallel_for(static_cast<int64_t>(all_cubes.size()), opt.jobs, [&](int64_t i) {
            const DyadicCube& cube = all_cubes[static_cast<size_t>(i)];
            const double n1 = chi_norm_on_grid(phi_p, grid, cube.rect, tol).value;
            const double n2 = chi_norm_on_grid(phi_p, grid, cube.dilated(2.0), tol).value;
            if (n1 > 0.0) vals[static_cast<size_t>(i)] = n2 / n1;
        });
        const double worst = *std::max_element(vals.begin(), vals.end());
        add_check(rep, out, "indicator_doubling_max", worst, 0.0, cal.doubling_bound);
    }

    // Difference-exponent indicator norms invert the embedding factor.
    {
        const ExponentField beta =
            ExponentField::combine(p, q, ExponentField::CombineMode::Difference);
        const GPhiFunction phi_beta = GPhiFunction::power(beta);
        double lo = kInf, hi = 0.0;
        std::vector<double> vals(all_cubes.size(), 1.0);
        parallel_for(static_cast<int64_t>(all_cubes.size()), opt.jobs, [&](int64_t i) {
            const DyadicCube& cube = all_cubes[static_cast<size_t>(i)];
            const double np = chi_norm_on_grid(phi_p, grid, cube.rect, tol).value;
            const double nq = chi_norm_on_grid(phi_q, grid, cube.rect, tol).value;
            const double nb = chi_norm_on_grid(phi_beta, grid, cube.rect, tol).value;
            if (np > 0.0) vals[static_cast<size_t>(i)] = (nq / np) * nb;
        });
        for (double v : vals) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        add_check(rep, out, "embedding_factor_equivalence_min", lo, cal.embedding_equiv_low,
                  kInf);
        add_check(rep, out, "embedding_factor_equivalence_max", hi, 0.0,
                  cal.embedding_equiv_high);
    }

    // Regularity bookkeeping: the conjugate exponent has the same reciprocal
    // modulus, and products obey the two-sided splitting bound (both checked
    // on the same deterministic pair set).
    {
        const int64_t budget = cfg.get_int("suite", "regularity_budget", 20000);
        const uint64_t rseed = splitmix64(opt.seed ^ 0x1fb2c64du);
        const RegularityReport rp = estimate_regularity(p, budget, rseed);
        const RegularityReport rc = estimate_regularity(p.conjugate(), budget, rseed);
        add_check(rep, out, "conjugate_reciprocal_modulus_gap",
                  std::abs(rp.local_logholder_constant - rc.local_logholder_constant), 0.0,
                  1e-9);
        const RegularityReport rq = estimate_regularity(q, budget, rseed);
        const RegularityReport rpq = estimate_regularity(
            ExponentField::combine(p, q, ExponentField::CombineMode::Product), budget, rseed);
        const double slack = rpq.loglog_constant -
                             (q.p_plus() * rp.loglog_constant + p.p_plus() * rq.loglog_constant);
        add_check(rep, out, "product_modulus_splitting_slack", slack, -kInf, 1e-9);
    }

    // The conjugate norm is a grid-sup lower bound, so pairing ratios are
    // inflated by the grid's resolution gap. 3200 geometric points keep that
    // inflation near 1e-5, well inside the duality check's true margin.
    const ConjugationGrid cgrid = ConjugationGrid::geometric(
        1e-8, 1e8, static_cast<int>(cfg.get_int("suite", "conjugation_points", 3200)));
    const GPhiFunction phi_log = GPhiFunction::power_log(p, theta);

    // Integral Hoelder inequality with the conjugate norm.
    {
        const auto pairs = static_cast<int64_t>(cfg.get_int("suite", "holder_pairs", 40));
        std::vector<double> ratios(static_cast<size_t>(pairs), 0.0);
        parallel_for(pairs, opt.jobs, [&](int64_t i) {
            const uint64_t s = splitmix64(opt.seed + 0x9d0c17e3u + static_cast<uint64_t>(i));
            const GridFunction f = random_test_function(grid, lattice, s);
            const GridFunction g = random_test_function(grid, lattice, splitmix64(s));
            const double nf = luxemburg_norm(phi_log, f, tol).value;
            const double ng = conjugate_norm(phi_log, cgrid, g, tol).value;
            const double integral = integrate(pointwise_product(f, g));
            if (nf > 0.0 && ng > 0.0) ratios[static_cast<size_t>(i)] = integral / (nf * ng);
        });
        const double worst = *std::max_element(ratios.begin(), ratios.end());
        add_check(rep, out, "holder_pairing_max_ratio", worst, 0.0, 2.0);
    }

    // Pointwise Young inequality for the conjugate pair.
    {
        const auto samples = static_cast<int64_t>(cfg.get_int("suite", "young_samples", 10000));
        uint64_t state = splitmix64(opt.seed ^ 0x2c3e50b7u);
        double worst = kInf;
        for (int64_t i = 0; i < samples; ++i) {
            const int64_t cell = uniform_index(state, grid.cell_count());
            const Point x = grid.cell_midpoint(cell);
            const double v = std::exp(uniform_draw(state, std::log(1e-6), std::log(1e6)));
            const double u = std::exp(uniform_draw(state, std::log(1e-6), std::log(1e6)));
            worst = std::min(worst, young_defect(phi_log, x, v, u, cgrid));
        }
        add_check(rep, out, "young_defect_min", worst, -1e-9, kInf);
    }

    // Norm duality: the canonical witness recovers the norm within fixed
    // two-sided factors.
    {
        const auto count = static_cast<int64_t>(cfg.get_int("suite", "duality_count", 30));
        std::vector<double> ratios(static_cast<size_t>(count), 1.0);
        parallel_for(count, opt.jobs, [&](int64_t i) {
            const uint64_t s = splitmix64(opt.seed + 0x4aa31dbfu + static_cast<uint64_t>(i));
            const GridFunction f = random_test_function(grid, lattice, s);
            const double nf = luxemburg_norm(phi_log, f, tol).value;
            if (nf <= 0.0) return;
            GridFunction g(grid);
            for (int64_t c = 0; c < f.size(); ++c) {
                const double fh = f[c] / nf;
                g[c] = fh > 0.0 ? phi_log(grid.cell_midpoint(c), fh) / fh : 0.0;
            }
            const double ng = conjugate_norm(phi_log, cgrid, g, tol).value;
            if (ng <= 0.0) return;
            ratios[static_cast<size_t>(i)] = integrate(pointwise_product(f, g)) / (ng * nf);
        });
        double lo = kInf, hi = 0.0;
        for (double r : ratios) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        add_check(rep, out, "duality_witness_ratio_min", lo, 0.25, kInf);
        add_check(rep, out, "duality_witness_ratio_max", hi, 0.0, 2.0);
    }

    // Plain averages never exceed the average-form maximal function.
    {
        const GridFunction f = random_test_function(grid, lattice, splitmix64(opt.seed ^ 0x11u));
        const MaximalSpec avg_spec{GPhiFunction::identity(box), std::nullopt, false, tol};
        const GridFunction mf = maximal_function(avg_spec, lattice, f, opt.jobs);
        double worst = 0.0;
        for (const DyadicCube& cube : lattice.cubes(false)) {
            double cube_min = kInf;
            grid.for_cells_in(cube.rect, [&](int64_t c, const Point&) {
                cube_min = std::min(cube_min, mf[c]);
            });
            if (!std::isfinite(cube_min)) continue;
            const double avg = average(f, cube);
            if (avg > 0.0) worst = std::max(worst, avg / cube_min);
        }
        add_check(rep, out, "maximal_dominates_averages", worst, 0.0, 1.0 + 1e-12);
    }

    // Operator-norm probe of the Orlicz maximal function.
    {
        const auto probe_trials = static_cast<int>(cfg.get_int("suite", "probe_trials", 10));
        const MaximalSpec spec{phi_p, std::nullopt, false, tol};
        const double probe = boundedness_probe(spec, lattice, grid, p, p, probe_trials,
                                               splitmix64(opt.seed ^ 0x632be59bu), opt.jobs);
        add_check(rep, out, "maximal_probe_ratio", probe, 0.0, cal.maximal_probe_bound);
    }

    // Dyadic-annulus kernel comparison.
    {
        const ClassDReport kd = check_class_d(kernel, 1.0, 0.0, -10, 10);
        add_check(rep, out, "kernel_annulus_constant", kd.c_estimate, 0.0, kFiniteCeiling);
    }

    // Pointwise domination of the commutator by the cube-tower majorant.
    {
        const auto mtrials = static_cast<int64_t>(cfg.get_int("suite", "majorant_trials", 5));
        const int m = static_cast<int>(cfg.get_int("symbol", "m", 1));
        std::vector<double> slacks(static_cast<size_t>(mtrials), 0.0);
        parallel_for(mtrials, opt.jobs, [&](int64_t i) {
            const uint64_t s = splitmix64(opt.seed + 0x7b1fa2c9u + static_cast<uint64_t>(i));
            const GridFunction f = random_test_function(grid, lattice, s);
            const int mm = static_cast<int>(static_cast<uint64_t>(i) % 3 == 0 ? 0 : m);
            const GridFunction tf = apply_commutator(kernel, b, mm, f, 1);
            const MajorantResult maj = dyadic_majorant(kernel, b, mm, f, lattice, 1);
            double scale = std::max(maj.value.max_abs(), 1.0);
            double worst = 0.0;
            for (int64_t c = 0; c < tf.size(); ++c) {
                worst = std::max(worst, (std::abs(tf[c]) - maj.self_term[c] - maj.value[c]));
            }
            slacks[static_cast<size_t>(i)] = worst / scale;
        });
        const double worst = *std::max_element(slacks.begin(), slacks.end());
        add_check(rep, out, "commutator_majorant_slack", worst, -kInf, 1e-9);
    }

    // Stopping families: packing strictly below alpha, residual sets disjoint
    // across all thresholds, and cube measure controlled by its residual.
    {
        const auto strials = static_cast<int64_t>(cfg.get_int("suite", "stopping_trials", 10));
        const ProofExponents pe = derive_proof_exponents(p, q, R, S);
        const double alpha = cfg.get_double("suite", "alpha", cal.default_alpha);
        double max_packing = 0.0;
        int64_t overlap_violations = 0;
        double min_measure_ratio = kInf;
        for (int64_t trial = 0; trial < strials; ++trial) {
            const uint64_t s = splitmix64(opt.seed + 0x5dd1b6a3u + static_cast<uint64_t>(trial));
            const GridFunction g = random_test_function(grid, lattice, s);
            const GridFunction gw = pointwise_product(g, weights.w);
            const std::vector<double> values = norm_ratio_values(pe.tau, gw, lattice, tol,
                                                                 opt.jobs);
            const StoppingFamily family = build_stopping_family(values, alpha, lattice);
            if (family.level_count() == 0) continue;
            max_packing = std::max(max_packing, family.packing_constant / alpha);

            std::vector<uint8_t> claimed(static_cast<size_t>(grid.cell_count()), 0);
            for (int k = family.k_lo; k <= family.k_hi; ++k) {
                // Cells covered by the next threshold's selected cubes.
                std::vector<uint8_t> next(static_cast<size_t>(grid.cell_count()), 0);
                if (k + 1 <= family.k_hi) {
                    for (const StoppingEntry& e : family.at(k + 1)) {
                        grid.for_cells_in(e.cube.rect, [&](int64_t c, const Point&) {
                            next[static_cast<size_t>(c)] = 1;
                        });
                    }
                }
                for (const StoppingEntry& e : family.at(k)) {
                    grid.for_cells_in(e.cube.rect, [&](int64_t c, const Point&) {
                        if (next[static_cast<size_t>(c)]) return;
                        overlap_violations += claimed[static_cast<size_t>(c)];
                        claimed[static_cast<size_t>(c)] = 1;
                    });
                    if (family.packing_ok) {
                        const double lower =
                            (1.0 - family.packing_constant / alpha) * e.cube.measure();
                        if (lower > 0.0) {
                            min_measure_ratio =
                                std::min(min_measure_ratio, e.residual_measure / lower);
                        }
                    }
                }
            }
        }
        add_check(rep, out, "stopping_packing_fraction", max_packing, 0.0, 1.0, true);
        add_check(rep, out, "stopping_residual_overlaps",
                  static_cast<double>(overlap_violations), 0.0, 0.0);
        add_check(rep, out, "stopping_measure_vs_residual",
                  std::isfinite(min_measure_ratio) ? min_measure_ratio : 1.0, 1.0, kInf);

        // Disjoint partition sums against the norm product.
        const int level = std::min(lattice.j_min() + 2, lattice.j_max());
        std::vector<DyadicCube> partition;
        const int64_t per_side = int64_t{1} << level;
        for (int64_t iy = 0; iy < (box.dim == 2 ? per_side : 1); ++iy) {
            for (int64_t ix = 0; ix < per_side; ++ix) {
                partition.push_back(lattice.cube_at(level, {ix, iy}));
            }
        }
        const GridFunction f1 =
            random_test_function(grid, lattice, splitmix64(opt.seed ^ 0x91b4003du));
        const GridFunction g1 =
            random_test_function(grid, lattice, splitmix64(opt.seed ^ 0x5654a1efu));
        add_check(rep, out, "disjoint_partition_sum_ratio",
                  disjoint_sum_ratio(p, f1, g1, partition, tol), 0.0, cal.disjoint_sum_bound);

        // Overlapping triple-cube sums at fixed depth below the root.
        const DyadicCube root = lattice.cube_at(lattice.j_min(), {0, 0});
        double worst_overlap = 0.0;
        const int max_depth = std::min(6, lattice.j_max() - lattice.j_min());
        for (int d = 1; d <= max_depth; ++d) {
            worst_overlap =
                std::max(worst_overlap, overlapping_sum_ratio(p, f1, g1, root, d, lattice, tol));
        }
        add_check(rep, out, "overlapping_sum_ratio_max", worst_overlap, 0.0,
                  cal.overlap_sum_bound);

        // Localized kernel-tail comparison on the root and a centered cube.
        const GridFunction fpos = random_weight(grid, 2.0, splitmix64(opt.seed ^ 0x3d6f1b2au));
        double worst_local = 0.0;
        const DyadicCube mid =
            lattice.containing(std::min(lattice.j_min() + 1, lattice.j_max()), box.center);
        for (const DyadicCube& q0 : {root, mid}) {
            worst_local =
                std::max(worst_local,
                         local_sum_bound_check(kernel, fpos, pe.omega, q0, lattice, 1.0, 1.0,
                                               tol, opt.jobs)
                             .ratio());
        }
        add_check(rep, out, "local_kernel_sum_ratio", worst_local, 0.0, cal.local_sum_bound);
    }

    // Symbol oscillation package.
    {
        const double rho = cfg.get_double("symbol", "rho", 2.0);
        const auto [rho_sem, one_sem] = seminorm_equivalence_check(b, a, rho, lattice, opt.jobs);
        if (one_sem > 0.0) {
            add_check(rep, out, "seminorm_power_mean_ratio", rho_sem / one_sem, 1.0 - 1e-12,
                      cal.seminorm_equiv_high);
        }
        const SymbolReport sym = lipschitz_seminorm(b, a, 1.0, lattice, true, opt.jobs);
        add_check(rep, out, "functional_nesting_ratio", sym.t_infinity, 1.0, 1.0 + 1e-6);

        const SymbolReport bmo = lipschitz_seminorm(b, CubeFunctional::one(), 1.0, lattice, false,
                                                    opt.jobs);
        if (bmo.seminorm > 0.0) {
            double worst = 0.0;
            for (int k = 1; k <= 2; ++k) {
                for (const DyadicCube& cube : sampled_cubes(lattice, 4)) {
                    if (region_measure(grid, cube.rect) <= 0.0) continue;
                    const double r = oscillation_norm_ratio(b, p, k, cube, tol);
                    worst = std::max(worst, r / std::pow(bmo.seminorm, k));
                }
            }
            add_check(rep, out, "oscillation_norm_vs_seminorm", worst, 0.0, cal.izuki_bound);
        }
        if (sym.seminorm > 0.0) {
            double worst = 0.0;
            for (const DyadicCube& cube : lattice.cubes(false)) {
                if (region_measure(grid, cube.rect) <= 0.0) continue;
                const double gap = nested_average_gap(b, cube);
                const double scale = a(cube) * sym.seminorm;
                if (scale > 0.0) worst = std::max(worst, gap / scale);
            }
            add_check(rep, out, "dilated_average_gap", worst, 0.0, cal.nested_gap_bound);
        }
        const GridFunction fw = random_weight(grid, 3.0, splitmix64(opt.seed ^ 0x2ab9e1cdu));
        double worst_pa = 0.0;
        for (const DyadicCube& cube : sampled_cubes(lattice, 4)) {
            if (region_measure(grid, cube.rect) <= 0.0) continue;
            worst_pa = std::max(worst_pa, power_average_ratio(fw, p, 0.5, cube, tol));
        }
        add_check(rep, out, "fractional_power_average_ratio", worst_pa, 0.0,
                  cal.power_average_bound);
    }

    // Indicator-norm formula on the configured lattice.
    {
        const int per_level = static_cast<int>(cfg.get_int("suite", "per_level", 6));
        const int subdiv = static_cast<int>(cfg.get_int("suite", "subdiv", 128));
        const FormulaTable table = verify_norm_formula(p, theta, lattice, per_level, subdiv, tol,
                                                       opt.jobs);
        add_check(rep, out, "formula_ratio_min", table.min_ratio, cal.formula_ratio_low, kInf);
        add_check(rep, out, "formula_ratio_max", table.max_ratio, 0.0, cal.formula_ratio_high);
        add_check(rep, out, "formula_log_slope_abs", std::abs(table.log_slope), 0.0,
                  cal.formula_slope_tol);
        const LemmaChainReport chain = verify_lemma_chain(p, theta, lattice, per_level, subdiv,
                                                          tol, opt.jobs);
        const double chain_max =
            std::max({chain.log_power_osc_bound, chain.inverse_average_bound,
                      chain.two_factor_bound, chain.average_vs_norm_bound});
        add_check(rep, out, "formula_support_bounds_max", chain_max, 0.0, kFiniteCeiling);
    }

    rep.summary_flag("pass", out.pass);
    ensure_out_dir(opt);
    out.files.push_back(rep.write_file(opt.out_dir, "suite_report", opt.format));
    return out;
}

} // namespace varlex
