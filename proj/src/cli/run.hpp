#pragma once

#include <string>
#include <vector>

#include "format.hpp"
#include "stheat/norms.hpp"
#include "stheat/solver.hpp"

namespace stheat::cli {

struct RunConfig {
    std::vector<double> nus = {1.0, 0.1, 0.01};
    std::vector<int> h_cells = {5, 10, 20};
    std::vector<int> k_cells = {40, 80, 120, 160, 200, 240, 280, 320, 360, 400};
    double T = 1.0;
    Mode mode = Mode::fast;
    OutputFormat format = OutputFormat::markdown;
    std::string out_path;         ///< empty writes to stdout
    std::string case_label = "u1";
    Scheme scheme = Scheme::Q;
    int jobs = 0;                 ///< worker threads for sweeps; 0 = hardware
    std::string dump_matrices;    ///< path prefix for operator dumps (constants)
    std::string export_solution;  ///< CSV path for the solved field (validate)
};

enum class TableKind { eta, eta_hat, gamma };

/// Exit codes shared by the commands: 0 success, 1 usage error,
/// 2 numerical verification failure, 3 bound violation.
int cmd_table(const RunConfig& cfg, TableKind which);
int cmd_constants(const RunConfig& cfg);
int cmd_validate(const RunConfig& cfg);

}  // namespace stheat::cli
