#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include <coalitiond/game.hpp>

#include "run_config.hpp"

namespace coalitiond::cli {

struct RunResult
{
    std::filesystem::path directory;
    nlohmann::json summary;
};

/// COALITIOND_OUT if set, otherwise cfg.output_root.
std::filesystem::path output_root(const RunConfig& cfg);

/// The dynamic game a config describes (CSV ingestion or a synthetic generator).
DynamicGame build_game(const RunConfig& cfg);

/// Runs the tracker and writes trajectory.csv, errors.csv, summary.json and
/// manifest.json under <root>/<scenario>/<tag or UTC timestamp>/.
RunResult run(const RunConfig& cfg);

} // namespace coalitiond::cli
