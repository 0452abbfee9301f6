// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "gpmp/errors.hpp"

namespace {

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("gpmp_cli_test_" + name);
}

gpmp::cli::RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return gpmp::cli::parse_config(in);
}

std::string strip_header(const std::string& report) { return report.substr(report.find('\n') + 1); }

TEST(Config, ParsesSectionsAndDefaults) {
    const auto cfg = parse("[problem]\nid = mth-order\na = 0 1\nT = 2\n[grids]\ntau_count = 5\n[run]\nsuites = needle lipschitz\nseed = 3\n");
    EXPECT_EQ(cfg.problem.id, "mth-order");
    EXPECT_EQ(cfg.problem.a, (gpmp::Vec{0.0, 1.0}));
    EXPECT_DOUBLE_EQ(cfg.problem.T, 2.0);
    EXPECT_EQ(cfg.grids.tau_count, 5);
    EXPECT_EQ(cfg.grids.omega_per_axis, 17);
    EXPECT_EQ(cfg.suites, (std::vector<std::string>{"needle", "lipschitz"}));
    EXPECT_EQ(cfg.seed, 3u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    for (const char* text : {"[problem]\nid = pendulum-r2\ncolour = red\n", "[bogus]\nx = 1\n", "[problem]\nid = nope\n",
                             "[grids]\ntau_count = abc\n", "[run]\nsuites = needle dance\n", "[grids]\neps_count = 2\n"}) {
        try {
            parse(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const gpmp::Error& e) {
            EXPECT_EQ(e.code(), gpmp::ErrorCode::ConfigError) << text;
        }
    }
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(gpmp::cli::format_number(0.1), "0.1");
    EXPECT_EQ(gpmp::cli::format_number(-2.0), "-2");
    const double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(gpmp::cli::format_number(x)), x);
}

TEST(Run, OrderBelowTwoRPlusOneIsConfigError) {
    auto cfg = parse("[problem]\nid = pendulum-r2\nn = 4\n[run]\nsuites = validate\n");
    cfg.out_dir = scratch("bad_order");
    EXPECT_EQ(gpmp::cli::run(cfg).exit_code, gpmp::cli::BadConfig);
}

TEST(Run, WrongSignReferenceIsViolation) {
    auto cfg = parse("[problem]\nid = pendulum-r2\n[control]\nreference = constant\nvalue = -1\n[grids]\ntau_count = 4\nomega_per_axis = 3\neps_count = 3\n[run]\nsuites = pmp-scan\n");
    cfg.out_dir = scratch("wrong_sign");
    const auto res = gpmp::cli::run(cfg);
    EXPECT_EQ(res.exit_code, gpmp::cli::Violation);
    EXPECT_NE(res.report.find("worst_violations"), std::string::npos);
}

TEST(Run, ReportAndCsvAreDeterministic) {
    auto cfg = parse("[problem]\nid = pendulum-r2\n[grids]\ntau_count = 4\nomega_per_axis = 3\neps_count = 3\nlipschitz_pairs = 10\ncsv_nodes = 11\n[run]\nsuites = pmp-scan lipschitz\nseed = 5\n");
    cfg.out_dir = scratch("determinism");
    const auto a = gpmp::cli::run(cfg);
    const auto b = gpmp::cli::run(cfg);
    EXPECT_EQ(a.exit_code, gpmp::cli::Ok);
    EXPECT_EQ(strip_header(a.report), strip_header(b.report));

    std::ifstream csv(cfg.out_dir / cfg.csv_name);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "t,x,x',p,p',u");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 11);
}

}  // namespace
