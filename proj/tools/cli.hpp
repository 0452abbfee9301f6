// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpmp/examples.hpp"

namespace gpmp::cli {

/// Exit statuses of the runner.
enum Exit : int { Ok = 0, Violation = 1, BadConfig = 2, NumericalFailure = 3 };

inline const std::vector<std::string>& all_suites() {
    static const std::vector<std::string> s{"validate", "homotopy", "needle", "pmp-scan", "classical-cross", "lipschitz",
                                            "phi-probe"};
    return s;
}

struct Grids {
    int t_intervals = 400;
    int s_intervals = 64;
    int tau_count = 32;
    int omega_per_axis = 17;
    double eps0 = 0.1;
    int eps_count = 7;
    double needle_k = 0.05;
    int csv_nodes = 201;
    int lipschitz_pairs = 100;
    std::vector<double> v_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
};

struct RunConfig {
    BuiltinParams problem;
    int n_override = 0;               // 0 keeps the builtin jet order
    std::string reference = "optimal";  // optimal | constant
    double u_value = 1.0;
    bool optimize_v = false;
    double v = 1.0;
    bool transversal_adjoint = true;
    double homotopy_start = 0.0;
    Grids grids;
    std::vector<std::string> suites = all_suites();
    std::filesystem::path out_dir = "out";
    std::string report_name = "report.txt";
    std::string csv_name = "trajectory.csv";
    std::string mu_dump_name;  // empty disables the dump
    std::uint64_t seed = 7;
    bool quiet = false;
};

/// Reads the INI-style configuration; throws Error(ConfigError) on bad input.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

struct RunResult {
    int exit_code = Ok;
    std::string report;  // full report text, header line included
};

/// Executes the configured suites in order and writes the report, the
/// trajectory CSV and the optional mu' dump into cfg.out_dir.
RunResult run(const RunConfig& cfg);

/// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace gpmp::cli
