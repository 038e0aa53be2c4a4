// skdv: command-line entry point for the experiment suites.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skdv/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic damped KdV simulator and statistics suites"};
    app.require_subcommand(1);

    skdv::CommandOverrides overrides;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads, 0 = all cores");
    auto* out_opt = app.add_option("--out", out, "Output directory (overrides the config)");

    std::string config;
    std::string checkpoint;
    auto* run = app.add_subcommand("run", "Run the suite described by a config file");
    run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    auto* resume = app.add_subcommand("resume", "Continue a custom run from a checkpoint");
    resume->add_option("checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    resume->add_option("config", config, "Config the checkpoint was written under")->required()->check(CLI::ExistingFile);
    auto* keys = app.add_subcommand("keys", "List the accepted config keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : skdv::exit_config_invalid;
    }
    if (*seed_opt) overrides.seed = seed;
    if (*threads_opt) overrides.threads = threads;
    if (*out_opt) overrides.output_dir = out;

    if (*keys) {
        for (const auto& k : skdv::config_keys()) std::cout << k << '\n';
        return 0;
    }
    if (*run) return skdv::run_command(config, overrides);
    return skdv::resume_command(checkpoint, config, overrides);
}
