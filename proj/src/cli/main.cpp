#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "run.hpp"
#include "stheat/assembly.hpp"
#include "stheat/rigor.hpp"
#include "stheat/solver.hpp"

namespace {

using stheat::Mode;
using stheat::Scheme;
using stheat::cli::OutputFormat;
using stheat::cli::RunConfig;
using stheat::cli::TableKind;

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--nu", cfg.nus, "viscosity values")->delimiter(',');
    cmd->add_option("--h-cells", cfg.h_cells, "space cell counts (h = 1/value)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cmd->add_option("--k-cells", cfg.k_cells, "time cell counts (k = T/value)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cmd->add_option("--T", cfg.T, "final time")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", cfg.mode, "computation mode")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Mode>{{"fast", Mode::fast}, {"rigorous", Mode::rigorous}}));
    cmd->add_option("--format", cfg.format, "output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{
            {"markdown", OutputFormat::markdown},
            {"csv", OutputFormat::csv},
            {"json", OutputFormat::json}}));
    cmd->add_option("--out", cfg.out_path, "write output to this file instead of stdout");
    cmd->add_option("--jobs", cfg.jobs, "worker threads for sweeps (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-time P1 tensor-product solver for the heat equation:\n"
                 "stability constants, certified error-bound constants, scheme validation"};
    app.set_config("--config", "", "key=value config file; command-line flags win");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string table_kind = "eta";

    CLI::App* table = app.add_subcommand(
        "table", "sweep a (nu, h, k) grid and emit a constants table");
    table->add_option("kind", table_kind, "which table: eta, eta_hat or gamma")
        ->check(CLI::IsMember({"eta", "eta_hat", "gamma"}));
    add_common_options(table, cfg);

    CLI::App* constants = app.add_subcommand(
        "constants", "full constants report for a single configuration");
    add_common_options(constants, cfg);
    constants->add_option("--dump-matrices", cfg.dump_matrices,
                          "write the assembled operators as coordinate triplets "
                          "to files with this path prefix");

    CLI::App* validate = app.add_subcommand(
        "validate", "solve a manufactured case and check the stability and error bounds");
    add_common_options(validate, cfg);
    validate->add_option("--case", cfg.case_label, "manufactured case label (u1, u2, u3)");
    validate->add_option("--scheme", cfg.scheme, "discretization scheme")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Scheme>{
            {"Q", Scheme::Q}, {"Qhat", Scheme::Q_hat}, {"Q_hat", Scheme::Q_hat}}));
    validate->add_option("--export-solution", cfg.export_solution,
                         "write the solved field as CSV (single configuration only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (table->parsed()) {
            TableKind kind = TableKind::eta;
            if (table_kind == "eta_hat") kind = TableKind::eta_hat;
            if (table_kind == "gamma") kind = TableKind::gamma;
            return stheat::cli::cmd_table(cfg, kind);
        }
        if (constants->parsed()) return stheat::cli::cmd_constants(cfg);
        if (validate->parsed()) return stheat::cli::cmd_validate(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical verification failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
