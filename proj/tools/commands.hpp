/**
 * @file commands.hpp
 * @brief Subcommands of the gvflow command-line tool
 *
 * Exit codes: 0 success, 1 input/config error, 2 non-convergence,
 * 3 infeasible (check only). Reports go to `out`; warnings and errors
 * go to `err`.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gvflow/raster_export.hpp"

namespace gvflow::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kNotConverged = 2,
    kInfeasible = 3,
};

struct RunConfig {
    std::string input;
    std::string output;

    std::optional<double> ratio;
    int levels = 16;

    double damping = 0.4;
    double tolerance = 1e-6;
    std::optional<int> max_iter;
    bool second_order = false;
    bool multilevel = false;

    std::optional<double> alpha;
    std::optional<double> conductivity;
    std::optional<double> thickness;
    std::optional<double> storage;
    std::optional<double> dt;
    std::optional<double> cell;
    /// Scalar sink applied to every cell, or a well-log file of per-cell sinks.
    std::string source = "0";
    double flow_tolerance = 1e-8;
    int flow_max_iter = 10000;
    bool clamp3 = false;

    int target_cells = 10000;
    ExportFormat format = ExportFormat::asciigrid;
    std::string algorithm = "smooth";
    bool invert = false;
    int threads = 1;
};

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gvflow::cli
