#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coalitiond/game.hpp"

namespace coalitiond {

// --- collaborative forecasting market ----------------------------------------

/// Point forecasts of every agent for one instant and the realised outcome,
/// all as capacity factors in [0, 1].
struct ForecastRecord
{
    std::size_t k = 0;
    double timestamp = 0.0; ///< minutes
    std::vector<double> forecasts;
    double observation = 0.0;
};

/// 1 - |mean_{i in S} f_i - omega|; 0 for the empty coalition.
double forecast_value(const ForecastRecord& record, Coalition s);

InstantaneousGame forecast_to_game(const ForecastRecord& record);
DynamicGame forecast_dynamic_game(const std::vector<ForecastRecord>& records);

struct ForecastScenario
{
    std::size_t n_agents = 6;
    std::size_t horizon = 1152;
    /// Larger is smoother; the step of every latent random walk has std 1/smoothness.
    double smoothness = 100.0;
    /// Forecast error scale; agent i gets noise * (i + 1) / n.
    double noise = 0.05;
    std::uint64_t seed = 0;
    double resolution_minutes = 5.0;
};

std::vector<ForecastRecord> synthetic_forecast_records(const ForecastScenario& scenario);
DynamicGame synthetic_forecast_scenario(std::size_t n_agents, std::size_t horizon, double smoothness, double noise,
                                        std::uint64_t seed);

// --- local electricity market --------------------------------------------------

enum class Side { buyer, seller };

Side side_from_string(const std::string& s);
std::string to_string(Side s);

struct MarketAgentOffer
{
    AgentIndex agent = 0;
    Side side = Side::buyer;
    double quantity = 0.0; ///< kWh; demand for buyers, generation for sellers
    double price = 0.0;    ///< currency/kWh, stored positive
};

struct MarketSnapshot
{
    std::size_t k = 0;
    double timestamp = 0.0; ///< minutes
    std::vector<MarketAgentOffer> offers; ///< offers[i].agent == i
};

/// Maximum welfare of the coalition's internal double auction (merit order).
double electricity_value(const MarketSnapshot& snapshot, Coalition s);

struct Trade
{
    AgentIndex buyer;
    AgentIndex seller;
    double quantity;
};

/// The matched trades behind `electricity_value`; ties broken by agent index.
std::vector<Trade> merit_order_trades(const MarketSnapshot& snapshot, Coalition s);

InstantaneousGame snapshot_to_game(const MarketSnapshot& snapshot);
DynamicGame electricity_dynamic_game(const std::vector<MarketSnapshot>& snapshots);

struct ElectricityScenario
{
    std::size_t n_agents = 10;
    std::size_t n_sellers = 4;
    /// Length of the daylight window at the 10-minute source resolution.
    std::size_t source_steps = 37;
    double source_resolution_minutes = 10.0;
    std::uint64_t seed = 0;
};

/// Synthetic PV sellers and household buyers at the source resolution.
std::vector<MarketSnapshot> synthetic_electricity_snapshots(const ElectricityScenario& scenario);

// --- time series ingestion ---------------------------------------------------

enum class TimeseriesSchema { forecast, electricity };

/// Linear interpolation onto a `resolution_minutes` grid starting at the first timestamp.
std::vector<ForecastRecord> interpolate(const std::vector<ForecastRecord>& records, double resolution_minutes);
/// Interpolates net quantity (demand positive, generation negative) and price per agent.
std::vector<MarketSnapshot> interpolate(const std::vector<MarketSnapshot>& snapshots, double resolution_minutes);

using Timeseries = std::variant<std::vector<ForecastRecord>, std::vector<MarketSnapshot>>;

/**
 * Reads a CSV time series.
 *
 * forecast:    timestamp,f_1,...,f_N,observation
 * electricity: timestamp,agent,side,quantity,price (one row per agent and instant)
 *
 * Timestamps are minutes (plain numbers) or ISO-8601 `YYYY-MM-DD[T ]HH:MM[:SS]`
 * in UTC. Rows must be strictly increasing in time (electricity rows may repeat
 * an instant, one per agent). Errors name the 1-based file line.
 */
Timeseries ingest_timeseries(const std::filesystem::path& path, TimeseriesSchema schema,
                             std::optional<double> resolution_minutes = std::nullopt);

/// Timestamp cell -> minutes. Throws ParseError.
double parse_timestamp(const std::string& cell);

// --- synthetic drifting games ------------------------------------------------

/// v^k(S) = (sum_{i in S} w_i^k)^2 / N with weights on a bounded random walk of
/// step `drift`. Convex (supermodular), so every step has a non-empty core.
DynamicGame synthetic_drift_game(std::size_t n_agents, std::size_t horizon, double drift, std::uint64_t seed);

} // namespace coalitiond
