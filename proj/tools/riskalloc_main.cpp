// Command-line front door: allocate / coherence / compare.

#include <CLI11.hpp>

#include "riskalloc/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optimal capital allocation across dependent business lines"};
    app.require_subcommand(1);

    riskalloc::RunConfig config;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", config.scenario_path, "scenario JSON file")
                ->required()
                ->check(CLI::ExistingFile);
        }
        cmd->add_option("--out", config.output_dir, "output directory")->required();
        cmd->add_option_function<std::int64_t>(
            "--seed", [&](std::int64_t v) { config.seed_override = static_cast<std::uint64_t>(v); },
            "override the scenario seed");
        cmd->add_option("--threads", config.threads, "worker threads (0 = machine default)");
        cmd->add_flag("--quiet", config.quiet, "suppress progress output");
    };

    CLI::App* allocate = app.add_subcommand("allocate", "solve one allocation scenario");
    add_common(allocate, true);
    allocate->add_option_function<std::string>(
        "--solver", [&](std::string v) { config.solver_override = std::move(v); },
        "mirror_kw | projected_sgd | grid_oracle | bivariate_bisection");
    allocate->add_option_function<double>(
        "--resolution", [&](double v) { config.resolution_override = v; },
        "grid resolution as a fraction of capital");

    CLI::App* coherence = app.add_subcommand("coherence", "run the coherence property suite");
    add_common(coherence, false);
    coherence->add_option_function<std::string>(
        "--property", [&](std::string v) { config.property_filter = std::move(v); },
        "run only one property family");

    CLI::App* compare = app.add_subcommand("compare", "optimal-I vs optimal-J vs proportional");
    add_common(compare, true);
    compare->add_option_function<std::string>(
        "--solver", [&](std::string v) { config.solver_override = std::move(v); },
        "solver used for the optimal allocations");
    compare->add_option_function<double>(
        "--resolution", [&](double v) { config.resolution_override = v; },
        "grid resolution as a fraction of capital");

    CLI11_PARSE(app, argc, argv);

    if (allocate->parsed()) config.command = riskalloc::RunConfig::Command::allocate;
    if (coherence->parsed()) config.command = riskalloc::RunConfig::Command::coherence;
    if (compare->parsed()) config.command = riskalloc::RunConfig::Command::compare;
    return riskalloc::run(config);
}
