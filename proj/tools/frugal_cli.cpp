// Command-line front end: seeded runs, multi-seed sweeps, rank-vs-cost
// snapshots, and projection dumps, all emitting CSV artifacts.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frugal/frugal.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

std::string resolve_out(const std::string& cli_out, const frugal::ExperimentConfig& experiment) {
    return cli_out.empty() ? experiment.output_dir : cli_out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-aware active learning experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string label;
    std::string out_dir;
    std::uint64_t seed = 0;
    int iteration = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "Execute one labeled run for one seed");
    cmd_run->add_option("--config", config_path, "Experiment config file")->required();
    cmd_run->add_option("--label", label, "Run label from the config")->required();
    cmd_run->add_option("--seed", seed, "Root RNG seed")->required();
    cmd_run->add_option("--out", out_dir, "Output directory (default: config output_dir)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Execute every run for every configured seed");
    cmd_sweep->add_option("--config", config_path, "Experiment config file")->required();
    cmd_sweep->add_option("--out", out_dir, "Output directory (default: config output_dir)");

    CLI::App* cmd_rank = app.add_subcommand("rank-cost", "Rank the pool at a snapshot and attach true costs");
    cmd_rank->add_option("--config", config_path, "Experiment config file")->required();
    cmd_rank->add_option("--label", label, "Run label from the config")->required();
    cmd_rank->add_option("--seed", seed, "Root RNG seed")->required();
    cmd_rank->add_option("--iteration", iteration, "Snapshot iteration (0 = initial pool)")->required();
    cmd_rank->add_option("--out", out_dir, "Output directory (default: config output_dir)");

    CLI::App* cmd_pca = app.add_subcommand("pca-dump", "Dump the 2-D projection and cost field");
    cmd_pca->add_option("--config", config_path, "Experiment config file")->required();
    cmd_pca->add_option("--out", out_dir, "Output directory (default: config output_dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        const frugal::ExperimentConfig experiment = frugal::load_experiment(config_path);
        const std::string out = resolve_out(out_dir, experiment);
        if (cmd_run->parsed()) {
            frugal::cmd_run(experiment, label, seed, out);
        } else if (cmd_sweep->parsed()) {
            frugal::cmd_sweep(experiment, out);
        } else if (cmd_rank->parsed()) {
            frugal::cmd_rank_cost(experiment, label, seed, iteration, out);
        } else {
            frugal::cmd_pca_dump(experiment, out);
        }
    } catch (const frugal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
