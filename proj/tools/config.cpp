// SPDX-License-Identifier: MIT
#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cli.hpp"
#include "gpmp/errors.hpp"

namespace gpmp::cli {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"problem", {"id", "T", "v_max", "a", "f_coeffs", "f_gain", "n"}},
        {"control", {"reference", "value", "v", "optimize_v", "adjoint", "homotopy_start"}},
        {"tolerances", {"rtol", "atol"}},
        {"grids",
         {"t_intervals", "s_intervals", "tau_count", "omega_per_axis", "eps0", "eps_count", "needle_k", "csv_nodes",
          "lipschitz_pairs", "v_grid"}},
        {"run", {"suites", "out", "report", "csv", "mu_dump", "seed"}},
    };
    return k;
}

template <class T>
T read(const pt::ptree& sec, const std::string& key, T fallback) {
    const auto v = sec.get_optional<std::string>(key);
    if (!v) return fallback;
    std::istringstream is(*v);
    T out{};
    if (!(is >> out) || !(is >> std::ws).eof()) config_error("cannot read '" + key + "' from '" + *v + "'");
    return out;
}

bool read_bool(const pt::ptree& sec, const std::string& key, bool fallback) {
    const auto v = sec.get_optional<std::string>(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    config_error("'" + key + "' must be a boolean, got '" + *v + "'");
}

std::vector<double> read_list(const pt::ptree& sec, const std::string& key, std::vector<double> fallback) {
    const auto v = sec.get_optional<std::string>(key);
    if (!v) return fallback;
    std::istringstream is(*v);
    std::vector<double> out;
    double x = 0.0;
    while (is >> x) out.push_back(x);
    if (!(is.eof())) config_error("cannot read list '" + key + "' from '" + *v + "'");
    return out;
}

std::vector<std::string> read_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

void check_positive(int v, const char* key) {
    if (v <= 0) config_error(std::string(key) + " must be positive");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error(std::string("malformed config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    for (const auto& [name, sec] : tree) {
        const auto it = known_keys().find(name);
        if (it == known_keys().end()) config_error("unknown section [" + name + "]");
        for (const auto& kv : sec) {
            if (!it->second.count(kv.first)) config_error("unknown key '" + kv.first + "' in [" + name + "]");
        }
    }
    const pt::ptree empty;
    auto section = [&](const char* name) -> const pt::ptree& {
        const auto c = tree.get_child_optional(name);
        return c ? *c : empty;
    };

    RunConfig cfg;
    const auto& prob = section("problem");
    BuiltinParams& p = cfg.problem;
    p.id = read<std::string>(prob, "id", p.id);
    const auto ids = builtin_ids();
    if (std::find(ids.begin(), ids.end(), p.id) == ids.end()) config_error("unknown problem '" + p.id + "'");
    p.T = read(prob, "T", p.T);
    p.v_max = read(prob, "v_max", p.v_max);
    p.a = read_list(prob, "a", p.a);
    p.f_coeffs = read_list(prob, "f_coeffs", p.f_coeffs);
    p.f_gain = read(prob, "f_gain", p.f_gain);
    cfg.n_override = read(prob, "n", 0);
    if (p.id == "mth-order" && p.a.size() < 2) config_error("mth-order needs coefficients a = a_0 ... a_m");

    const auto& tol = section("tolerances");
    p.tol.rtol = read(tol, "rtol", p.tol.rtol);
    p.tol.atol = read(tol, "atol", p.tol.atol);
    if (!(p.tol.rtol > 0.0) || !(p.tol.atol > 0.0)) config_error("tolerances must be positive");

    const auto& ctl = section("control");
    cfg.reference = read<std::string>(ctl, "reference", cfg.reference);
    if (cfg.reference != "optimal" && cfg.reference != "constant") {
        config_error("reference must be 'optimal' or 'constant'");
    }
    cfg.u_value = read(ctl, "value", cfg.u_value);
    cfg.v = read(ctl, "v", p.v_max);
    cfg.optimize_v = read_bool(ctl, "optimize_v", cfg.optimize_v);
    const std::string adj = read<std::string>(ctl, "adjoint", "transversal");
    if (adj != "transversal" && adj != "default") config_error("adjoint must be 'transversal' or 'default'");
    cfg.transversal_adjoint = adj == "transversal";
    cfg.homotopy_start = read(ctl, "homotopy_start", cfg.homotopy_start);

    const auto& g = section("grids");
    Grids& gr = cfg.grids;
    gr.t_intervals = read(g, "t_intervals", gr.t_intervals);
    gr.s_intervals = read(g, "s_intervals", gr.s_intervals);
    gr.tau_count = read(g, "tau_count", gr.tau_count);
    gr.omega_per_axis = read(g, "omega_per_axis", gr.omega_per_axis);
    gr.eps0 = read(g, "eps0", gr.eps0);
    gr.eps_count = read(g, "eps_count", gr.eps_count);
    gr.needle_k = read(g, "needle_k", gr.needle_k);
    gr.csv_nodes = read(g, "csv_nodes", gr.csv_nodes);
    gr.lipschitz_pairs = read(g, "lipschitz_pairs", gr.lipschitz_pairs);
    gr.v_grid = read_list(g, "v_grid", gr.v_grid);
    check_positive(gr.t_intervals, "t_intervals");
    check_positive(gr.s_intervals, "s_intervals");
    check_positive(gr.tau_count, "tau_count");
    check_positive(gr.lipschitz_pairs, "lipschitz_pairs");
    if (gr.omega_per_axis < 2) config_error("omega_per_axis must be at least 2");
    if (gr.eps_count < 3) config_error("eps_count must be at least 3");
    if (gr.csv_nodes < 2) config_error("csv_nodes must be at least 2");
    if (!(gr.eps0 > 0.0)) config_error("eps0 must be positive");
    if (!(gr.needle_k > 0.0 && gr.needle_k < 1.0)) config_error("needle_k must lie in (0, 1)");
    if (gr.v_grid.size() < 2) config_error("v_grid needs at least two velocities");

    const auto& r = section("run");
    if (const auto s = r.get_optional<std::string>("suites")) {
        cfg.suites = read_words(*s);
        if (cfg.suites.size() == 1 && cfg.suites.front() == "all") cfg.suites = all_suites();
    }
    for (const auto& s : cfg.suites) {
        if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end()) {
            config_error("unknown suite '" + s + "'");
        }
    }
    if (cfg.suites.empty()) config_error("no suites requested");
    cfg.out_dir = read<std::string>(r, "out", cfg.out_dir.string());
    cfg.report_name = read<std::string>(r, "report", cfg.report_name);
    cfg.csv_name = read<std::string>(r, "csv", cfg.csv_name);
    cfg.mu_dump_name = read<std::string>(r, "mu_dump", cfg.mu_dump_name);
    cfg.seed = read<std::uint64_t>(r, "seed", cfg.seed);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace gpmp::cli
