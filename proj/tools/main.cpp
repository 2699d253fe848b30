#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eeesim/commands.hpp"

using namespace eeesim;

int main(int argc, char** argv) {
    CLI::App app{"eeesim - energy-efficient Ethernet link policy simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = "out";
    std::string seed_str;
    app.add_option("--config", config_path, "config file (key=value lines)");
    app.add_option("--set", sets, "override a config key, key=value (repeatable)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_str, "RNG seed (overrides config)");

    auto* synth = app.add_subcommand("synth", "synthesize a self-similar packet trace");
    std::string preset;
    std::string name;
    synth->add_option("--preset", preset, "a-high | a-low | b-random");
    synth->add_option("--name", name, "output file stem");

    auto* analyze = app.add_subcommand("analyze", "estimate self-similarity of a trace");
    std::string analyze_trace;
    double tick_ms = 1.0;
    analyze->add_option("trace", analyze_trace, "packets-csv file")->required();
    analyze->add_option("--tick-ms", tick_ms, "binning tick [ms]");

    auto* simulate = app.add_subcommand("simulate", "run link policies over a trace");
    std::string sim_trace;
    std::string policy = "all";
    simulate->add_option("--trace", sim_trace, "packets-csv file (default: synthesize)");
    simulate->add_option("--policy", policy, "on | eee | eeep | all")
        ->check(CLI::IsMember({"on", "eee", "eeep", "all"}));

    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid");
    std::string sweep_trace;
    std::string sweep_mode = "sim";
    std::string sweep_policy = "eeep";
    std::vector<std::string> axes;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    sweep->add_option("--trace", sweep_trace, "packets-csv file (default: synthesize per point)");
    sweep->add_option("--mode", sweep_mode, "sim | theory")
        ->check(CLI::IsMember({"sim", "theory"}));
    sweep->add_option("--policy", sweep_policy, "policy for sim mode")
        ->check(CLI::IsMember({"on", "eee", "eeep"}));
    sweep->add_option("--axis", axes, "key=v1,v2,... or key=start:stop:step (repeatable)");
    sweep->add_option("--jobs", jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& kv : sets) cfg.set_kv(kv);
        if (!seed_str.empty()) cfg.set("seed", seed_str);

        if (synth->parsed()) return cmd_synth(cfg, preset, out_dir, name);
        if (analyze->parsed()) return cmd_analyze(analyze_trace, tick_ms * 1e-3, out_dir);
        if (simulate->parsed()) return cmd_simulate(cfg, sim_trace, policy, out_dir);
        if (sweep->parsed())
            return cmd_sweep(cfg, sweep_trace, sweep_mode, sweep_policy, axes, out_dir, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
