#include "CLI11.hpp"

#include "varlex/config.hpp"
#include "varlex/experiment.hpp"

#include <chrono>
#include <iostream>
#include <stdexcept>
#include <string>

namespace {

struct CliState {
    std::string config_path;
    std::string theorem;
    varlex::RunOptions options;
};

void add_common_options(CLI::App* sub, CliState& state) {
    sub->add_option("--config", state.config_path, "key-table configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", state.options.seed, "master seed for randomized checks");
    sub->add_option("--out", state.options.out_dir, "directory for report files");
    sub->add_option("--format", state.options.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", state.options.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
}

int dispatch(const std::string& name, const CliState& state) {
    const varlex::Config cfg = varlex::Config::parse_file(state.config_path);
    varlex::RunOutcome outcome;
    if (name == "norm") {
        outcome = varlex::run_norm(cfg, state.options);
    } else if (name == "check-kernel") {
        outcome = varlex::run_check_kernel(cfg, state.options);
    } else if (name == "certify") {
        outcome = varlex::run_certify(cfg, state.options);
    } else if (name == "verify") {
        outcome = varlex::run_verify(state.theorem, cfg, state.options);
    } else if (name == "suite") {
        outcome = varlex::run_suite(cfg, state.options);
    } else if (name == "formula") {
        outcome = varlex::run_formula(cfg, state.options);
    } else {
        outcome = varlex::run_sparse(cfg, state.options);
    }
    for (const std::string& line : outcome.lines) std::cout << line << "\n";
    for (const std::string& file : outcome.files) std::cout << "wrote " << file << "\n";
    return outcome.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variable-exponent function space and potential-operator toolkit"};
    app.require_subcommand(1);
    CliState state;

    CLI::App* norm = app.add_subcommand("norm", "Luxemburg norm of a grid function");
    CLI::App* kernel = app.add_subcommand("check-kernel", "dyadic-annulus kernel comparison");
    CLI::App* certify = app.add_subcommand("certify", "two-weight testing-condition sweep");
    CLI::App* verify = app.add_subcommand("verify", "end-to-end norm-inequality verification");
    CLI::App* suite = app.add_subcommand("suite", "full invariant suite");
    CLI::App* formula = app.add_subcommand("formula", "indicator-norm formula sweep");
    CLI::App* sparse = app.add_subcommand("sparse", "stopping-time family export");
    for (CLI::App* sub : {norm, kernel, certify, verify, suite, formula, sparse}) {
        add_common_options(sub, state);
    }
    verify->add_option("theorem", state.theorem, "which main inequality: 1.1 or 1.2")
        ->required()
        ->check(CLI::IsMember({"1.1", "1.2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    int exit_code = 0;
    try {
        exit_code = dispatch(app.get_subcommands().front()->get_name(), state);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::cerr << "runtime_seconds=" << elapsed.count() << "\n";
    return exit_code;
}
