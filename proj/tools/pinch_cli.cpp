// SPDX-License-Identifier: Apache-2.0
//
// pinch: command-line front end.
//
//   pinch solve        [--config F] [--seed N] [--users M] [--schemes a,b] ...
//   pinch sweep-pmax   --out-dir D [--config F] [--seed N] [--realizations K] ...
//   pinch sweep-rmin   --out-dir D ...
//   pinch oracle-check [--trials N] [--seed N]
//
// Flags override the matching config keys. Sweeps write <prefix>_raw.csv,
// <prefix>_aggregate.csv and <prefix>_manifest.json; feeding the manifest
// back through --config reproduces the CSVs byte for byte.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pinch/experiment.hpp"
#include "pinch/results_io.hpp"
#include "pinch/testing/checks.hpp"

using namespace pinch;
using nlohmann::json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> users;
    std::optional<std::size_t> realizations;
    std::optional<double> grid_step;
    std::vector<std::string> schemes;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_out_dir)
{
    cmd->add_option("--config", f.config_path, "JSON config or manifest")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--users", f.users, "number of users");
    cmd->add_option("--realizations", f.realizations, "Monte-Carlo realizations per sweep point");
    cmd->add_option("--grid-step", f.grid_step, "exhaustive-search grid step in meters");
    cmd->add_option("--schemes", f.schemes, "noma_pso,noma_exhaustive,noma_fixed,tdma_exhaustive")->delimiter(',');
    auto* out = cmd->add_option("--out-dir", f.out_dir, "existing output directory");
    if (needs_out_dir) out->required();
}

ScenarioConfig load_config(const CommonFlags& f, json* raw = nullptr)
{
    json doc = f.config_path.empty() ? json::object() : read_json_file(f.config_path);
    ScenarioConfig c = config_from_json(doc);
    if (f.seed) c.master_seed = *f.seed;
    if (f.users) c.m_users = *f.users;
    if (f.realizations) c.n_realizations = *f.realizations;
    if (f.grid_step) c.grid_step = *f.grid_step;
    if (!f.schemes.empty()) {
        c.schemes.clear();
        for (const auto& s : f.schemes) c.schemes.push_back(parse_scheme(s));
    }
    c.validate();
    if (raw) *raw = doc.contains("config") ? doc.at("config") : doc;
    return c;
}

// An explicit "deployment" array in the config wins over a random drop:
// [{"x": 10, "y": 2, "p_max_dbm": 30, "r_min": 0.5}, ...]
Deployment solve_deployment(const ScenarioConfig& c, const json& doc)
{
    if (!doc.contains("deployment")) {
        return realization_deployment(c, 0, c.fixed_p_max_dbm, c.fixed_r_min);
    }
    std::vector<UserPosition> users;
    std::vector<double> p_max, r_min;
    for (const auto& u : doc.at("deployment")) {
        users.push_back({u.at("x").get<double>(), u.at("y").get<double>()});
        p_max.push_back(dbm_to_watts(u.value("p_max_dbm", c.fixed_p_max_dbm)));
        r_min.push_back(u.value("r_min", c.fixed_r_min));
    }
    return Deployment(users, p_max, r_min);
}

json solution_json(const Solution& s)
{
    return {{"x_pin", s.x_pin},
            {"powers_w", s.powers},
            {"rates", s.rates},
            {"sum_rate", s.sum_rate},
            {"feasible", s.feasible},
            {"outer_iterations", s.outer_iterations}};
}

int run_solve(const CommonFlags& f)
{
    json doc;
    const ScenarioConfig c = load_config(f, &doc);
    const Deployment dep = solve_deployment(c, doc);
    json users = json::array();
    for (std::size_t m = 0; m < dep.size(); ++m) {
        users.push_back({{"x", dep.users()[m].x},
                         {"y", dep.users()[m].y},
                         {"p_max_w", dep.p_max()[m]},
                         {"r_min", dep.r_min()[m]}});
    }
    json out{{"users", users}, {"solutions", json::object()}};
    for (Scheme s : c.schemes) {
        out["solutions"][std::string(scheme_name(s))] = solution_json(run_realization(dep, c, s, c.realization_seed(0)));
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sweep_cmd(const CommonFlags& f, SweepKind kind)
{
    const ScenarioConfig c = load_config(f);
    if (!fs::is_directory(f.out_dir)) {
        std::cerr << "error: output directory does not exist: " << f.out_dir << "\n";
        return 1;
    }
    const auto result = run_sweep(c, kind);
    const auto files = write_results(result, c, f.out_dir);
    std::cout << files.raw.string() << "\n" << files.aggregate.string() << "\n" << files.manifest.string() << "\n";
    return 0;
}

int run_oracle_check(std::size_t trials, std::size_t solver_trials, std::uint64_t seed, const CommonFlags& f)
{
    const ScenarioConfig c = load_config(f);
    using namespace pinch::testing;
    const CheckReport reports[] = {
        check_telescoping(trials, derive_seed(seed, 1)),
        check_min_power_consistency(trials, derive_seed(seed, 2)),
        check_greedy_vs_lp(trials, derive_seed(seed, 3)),
        check_pso_near_optimal(solver_trials, derive_seed(seed, 4), c, c.grid_step),
        check_joint_solver(solver_trials, derive_seed(seed, 5), c, c.grid_step),
    };
    bool all = true;
    for (const auto& r : reports) {
        all = all && r.passed;
        std::printf("[%s] %s (%.2f s) -- %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pinching-antenna uplink NOMA optimizer"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonFlags solve_f, pmax_f, rmin_f, oracle_f;
    auto* solve = app.add_subcommand("solve", "optimize one deployment and print the solutions as JSON");
    add_common(solve, solve_f, false);
    auto* pmax = app.add_subcommand("sweep-pmax", "Monte-Carlo sweep over the per-user power budget");
    add_common(pmax, pmax_f, true);
    auto* rmin = app.add_subcommand("sweep-rmin", "Monte-Carlo sweep over the common rate target");
    add_common(rmin, rmin_f, true);
    auto* oracle = app.add_subcommand("oracle-check", "run the property and oracle checks on random instances");
    add_common(oracle, oracle_f, false);
    std::size_t trials = 1000, solver_trials = 20;
    std::uint64_t oracle_seed = 1;
    oracle->add_option("--trials", trials, "instances for the algebraic checks");
    oracle->add_option("--solver-trials", solver_trials, "instances for the PSO and joint-solver checks");
    oracle->add_option("--check-seed", oracle_seed, "seed for the random instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(solve_f);
        if (*pmax) return run_sweep_cmd(pmax_f, SweepKind::PMax);
        if (*rmin) return run_sweep_cmd(rmin_f, SweepKind::RMin);
        if (*oracle) return run_oracle_check(trials, solver_trials, oracle_f.seed.value_or(oracle_seed), oracle_f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
