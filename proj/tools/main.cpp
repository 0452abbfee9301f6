// SPDX-License-Identifier: MIT
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "gpmp/errors.hpp"

int main(int argc, char** argv) {
    namespace cli = gpmp::cli;
    CLI::App app{"Batch verification runner for higher-order Pontryagin conditions"};
    std::string config_path;
    std::vector<std::string> suites;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "INI configuration file")->required();
    app.add_option("--suite", suites, "Suite to run (repeatable, overrides the config)")
        ->check(CLI::IsMember(cli::all_suites()));
    app.add_option("--out", out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized probes");
    app.add_flag("--quiet", quiet, "Do not echo the report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? cli::Ok : cli::BadConfig;
    }

    cli::RunConfig cfg;
    try {
        cfg = cli::load_config(config_path);
    } catch (const gpmp::Error& e) {
        std::cerr << e.what() << '\n';
        return cli::BadConfig;
    }
    if (!suites.empty()) cfg.suites = suites;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    cfg.quiet = quiet;

    const cli::RunResult res = cli::run(cfg);
    if (!cfg.quiet) std::cout << res.report;
    return res.exit_code;
}
