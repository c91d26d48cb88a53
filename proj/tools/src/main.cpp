#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace coalitiond::cli;

    CLI::App app{"coalitiond: online payoff distribution for dynamic coalitional games"};
    app.require_subcommand(1);

    std::string config;
    RunOverrides overrides;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::string tag;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run a tracking scenario and write its artifacts");
    run->add_option("config", config, "scenario config (JSON)")->required();
    auto* alpha_opt = run->add_option("--alpha", alpha, "step size");
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    auto* horizon_opt = run->add_option("--horizon", horizon, "number of steps");
    auto* tag_opt = run->add_option("--tag", tag, "output directory name (default: UTC timestamp)");
    auto* out_opt = run->add_option("--out", out_dir, "output root (COALITIOND_OUT still wins)");

    std::string game_path;
    auto* shapley = app.add_subcommand("shapley-exact", "print the exact Shapley value of a game");
    shapley->add_option("game", game_path, "game JSON")->required();

    std::string x_path;
    double tol = 1e-9;
    auto* core = app.add_subcommand("core-check", "test whether a payoff vector lies in the core");
    core->add_option("game", game_path, "game JSON")->required();
    core->add_option("x", x_path, "payoff vector CSV (one row)")->required();
    core->add_option("--tol", tol, "feasibility tolerance");

    auto* bench = app.add_subcommand("benchmark", "time one online step against the exact solution");
    bench->add_option("config", config, "benchmark config (JSON)")->required();

    auto* validate = app.add_subcommand("validate", "check a scenario config");
    validate->add_option("config", config, "scenario config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (*alpha_opt)
            overrides.alpha = alpha;
        if (*seed_opt)
            overrides.seed = seed;
        if (*horizon_opt)
            overrides.horizon = horizon;
        if (*tag_opt)
            overrides.tag = tag;
        if (*out_opt)
            overrides.out = out_dir;
        return cmd_run(config, overrides, std::cout, std::cerr);
    }
    if (shapley->parsed())
        return cmd_shapley_exact(game_path, std::cout, std::cerr);
    if (core->parsed())
        return cmd_core_check(game_path, x_path, tol, std::cout, std::cerr);
    if (bench->parsed())
        return cmd_benchmark(config, std::cout, std::cerr);
    if (validate->parsed())
        return cmd_validate(config, std::cout, std::cerr);
    return 1;
}
