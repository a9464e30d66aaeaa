#pragma once

#include "varlex/conditions.hpp"
#include "varlex/config.hpp"
#include "varlex/exponent_field.hpp"
#include "varlex/geometry.hpp"
#include "varlex/gphi.hpp"
#include "varlex/kernels.hpp"
#include "varlex/symbols.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace varlex {

// Options shared by every subcommand run.
struct RunOptions {
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json
    uint64_t seed = 1;
    int jobs = 1;
};

// What a run produced: a pass/fail verdict, human-readable check lines for
// stdout, and the report files written under out_dir. Lines and files are
// deterministic in (config, seed); wall-clock time never appears in either.
struct RunOutcome {
    bool pass = true;
    std::vector<std::string> lines;
    std::vector<std::string> files;
};

// ==== config-driven object builders (shared by the CLI and the tests) ====

Box build_box(const Config& cfg);
Grid build_grid(const Config& cfg);
CubeLattice build_lattice(const Config& cfg, const Box& box, int default_j_max);
// Exponent field from section keys `<prefix>kind`, `<prefix>value`, ...
ExponentField build_exponent(const Config& cfg, const std::string& section, const Box& box,
                             const std::string& prefix = "");
Kernel build_kernel(const Config& cfg, int dim);
GridFunction build_symbol(const Config& cfg, const Grid& grid);
CubeFunctional build_functional(const Config& cfg, const Box& box, int dim);
WeightPair build_weights(const Config& cfg, const Grid& grid);

// Exponent plumbing used inside the main-theorem verification:
//   s = R p', l = S q, mu in ((s')^+, p^-), nu in ((l')^+, (q^+)'),
//   1/omega = 1/s + 1/mu, 1/tau = 1/l + 1/nu.
// Midpoints are used for mu and nu; throws std::invalid_argument naming the
// violated inequality when an interval is empty.
struct ProofExponents {
    ExponentField s;
    ExponentField l;
    double mu = 0.0;
    double nu = 0.0;
    ExponentField omega;
    ExponentField tau;
};

ProofExponents derive_proof_exponents(const ExponentField& p, const ExponentField& q, double R,
                                      double S);

// ==== subcommand entry points ====
// Each throws ConfigError / std::invalid_argument / std::domain_error on
// invalid configuration (the CLI maps those to exit code 2) and reports
// check failures through RunOutcome::pass (exit code 1).

RunOutcome run_norm(const Config& cfg, const RunOptions& opt);
RunOutcome run_check_kernel(const Config& cfg, const RunOptions& opt);
RunOutcome run_certify(const Config& cfg, const RunOptions& opt);
// theorem is "1.1" or "1.2".
RunOutcome run_verify(const std::string& theorem, const Config& cfg, const RunOptions& opt);
RunOutcome run_suite(const Config& cfg, const RunOptions& opt);
RunOutcome run_formula(const Config& cfg, const RunOptions& opt);
RunOutcome run_sparse(const Config& cfg, const RunOptions& opt);

} // namespace varlex
