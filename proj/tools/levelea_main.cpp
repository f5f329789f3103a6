// Command-line front end: bound trajectories, Monte-Carlo simulation,
// combined figure reproduction, and the acceptance suite.
//
//   levelea bounds     --config configs/fig2.cfg --out out/fig2
//   levelea simulate   --config configs/fig2.cfg --runs 200
//   levelea experiment --config configs/fig2.cfg
//   levelea verify [--quick]
//
// Exit codes: 0 success, 1 validation error, 2 acceptance failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levelea/experiment.hpp"
#include "levelea/verify.hpp"

namespace {

levelea::ExperimentSpec load_spec(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    return levelea::spec_from_config(levelea::IniConfig::parse(text.str()));
}

void apply_overrides(levelea::ExperimentSpec& spec, int runs, long long seed,
                     const std::string& out) {
    if (runs > 0) spec.runs = runs;
    if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
    if (!out.empty()) spec.out_dir = out;
}

void report_files(const levelea::ExperimentResult& result) {
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fitness-level bound machinery for tournament-selection evolutionary algorithms"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int runs_override = 0;
    long long seed_override = -1;
    bool quick = false;

    auto* bounds_cmd = app.add_subcommand("bounds", "compute bound trajectories to CSV");
    bounds_cmd->add_option("--config", config_path, "experiment config file")->required();
    bounds_cmd->add_option("--out", out_dir, "output directory override");
    bounds_cmd->add_option("--seed", seed_override, "seed override");

    auto* sim_cmd = app.add_subcommand("simulate", "run the Monte-Carlo grid to CSV");
    sim_cmd->add_option("--config", config_path, "experiment config file")->required();
    sim_cmd->add_option("--out", out_dir, "output directory override");
    sim_cmd->add_option("--runs", runs_override, "run-count override");
    sim_cmd->add_option("--seed", seed_override, "seed override");

    auto* exp_cmd = app.add_subcommand("experiment", "simulate, merge with bounds, plot");
    exp_cmd->add_option("--config", config_path, "experiment config file")->required();
    exp_cmd->add_option("--out", out_dir, "output directory override");
    exp_cmd->add_option("--runs", runs_override, "run-count override");
    exp_cmd->add_option("--seed", seed_override, "seed override");

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    verify_cmd->add_flag("--quick", quick, "reduced run counts (intervals widen accordingly)");
    verify_cmd->add_option("--seed", seed_override, "seed override");
    verify_cmd->add_option("--out", out_dir, "unused; kept for symmetry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds_cmd->parsed()) {
            auto spec = load_spec(config_path);
            apply_overrides(spec, runs_override, seed_override, out_dir);
            report_files(levelea::cmd_bounds(spec));
            return 0;
        }
        if (sim_cmd->parsed()) {
            auto spec = load_spec(config_path);
            apply_overrides(spec, runs_override, seed_override, out_dir);
            report_files(levelea::cmd_simulate(spec));
            return 0;
        }
        if (exp_cmd->parsed()) {
            auto spec = load_spec(config_path);
            apply_overrides(spec, runs_override, seed_override, out_dir);
            report_files(levelea::run_experiment(spec));
            return 0;
        }
        if (verify_cmd->parsed()) {
            levelea::verify::VerifyOptions opt;
            if (quick) opt.n_scale = 1.0 / 16.0;
            if (seed_override >= 0) opt.seed = static_cast<std::uint64_t>(seed_override);
            const auto results = levelea::verify::run_all(opt, std::cout);
            int failures = 0;
            for (const auto& r : results) failures += !r.pass;
            std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
                      << '\n';
            return failures == 0 ? 0 : 2;
        }
    } catch (const levelea::MonotonicityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
