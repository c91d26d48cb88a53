#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <coalitiond/network.hpp>
#include <coalitiond/tracking.hpp>

namespace coalitiond::cli {

enum class Scenario { forecast, electricity, synthetic, custom_game_file };
enum class TrackerKind { shapley, core };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);
TrackerKind tracker_from_string(const std::string& s);
std::string to_string(TrackerKind t);

struct RunConfig
{
    Scenario scenario = Scenario::synthetic;
    TrackerKind tracker = TrackerKind::shapley;
    TrackerConfig tracking;
    NetworkSpec network;

    std::uint64_t seed = 0;
    std::size_t n_agents = 6;
    /// Steps to run; 0 keeps the full series of market scenarios.
    std::size_t horizon = 200;

    // synthetic generators
    double smoothness = 100.0;
    double noise = 0.05;
    double drift = 0.01;
    std::size_t n_sellers = 4;

    std::optional<double> lead_time_minutes;

    /// CSV for market scenarios, game JSON for custom-game-file.
    std::optional<std::filesystem::path> input;
    std::filesystem::path output_root = "out";
    std::string tag;
};

/// Fills `cfg` from JSON; unknown keys and type errors are appended to `problems`.
RunConfig run_config_from_json(const nlohmann::json& j, std::vector<std::string>& problems);

/// Resolved config, every field present.
nlohmann::json to_json(const RunConfig& cfg);

/// Semantic checks (ranges, caps, scenario/tracker combinations).
std::vector<std::string> validate(const RunConfig& cfg);

/// Reads and parses a config file. Throws InputError naming the path.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Parse + validate; throws InputError listing every problem.
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace coalitiond::cli
