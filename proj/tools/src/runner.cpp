#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <variant>

#include <coalitiond/errors.hpp>
#include <coalitiond/exact.hpp>
#include <coalitiond/markets.hpp>
#include <coalitiond/metrics.hpp>
#include <coalitiond/tracking.hpp>

namespace coalitiond::cli {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string utc_stamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

template <typename T>
std::vector<T> truncated(std::vector<T> v, std::size_t horizon)
{
    if (horizon > 0 && horizon < v.size())
        v.resize(horizon);
    return v;
}

const std::filesystem::path& require_input(const RunConfig& cfg)
{
    if (!std::filesystem::exists(*cfg.input))
        throw InputError("input file not found: " + cfg.input->string());
    return *cfg.input;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << content;
}

struct Series
{
    std::vector<PayoffMatrix> trajectory;
    std::vector<double> distance;
    std::vector<double> consensus;
    std::vector<double> violation;
    std::vector<PayoffVector> averaged;
    std::vector<PayoffVector> reference;
    std::vector<double> grand_value;
    /// Stacked iterate and stacked reference used by the mean cumulative error.
    std::vector<Eigen::VectorXd> x_err;
    std::vector<Eigen::VectorXd> ref_err;
};

double core_violation_of(const InstantaneousGame& game, const PayoffVector& x)
{
    const CoreCheck c = core_membership(game, x);
    return std::max({0.0, c.worst_violation, c.efficiency_gap});
}

Series track_shapley(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& tc)
{
    ShapleyRun r = shapley_track(game, graphs, tc);
    Series s;
    for (std::size_t k = 0; k < game.horizon(); ++k) {
        const PayoffVector mean = r.trajectory[k].colwise().mean().transpose();
        s.violation.push_back(core_violation_of(game.at(k), mean));
        s.averaged.push_back(mean);
        s.x_err.push_back(stacked(r.trajectory[k]));
        s.ref_err.push_back(stacked_consensus(r.shapley[k]));
    }
    s.trajectory = std::move(r.trajectory);
    s.distance = std::move(r.error);
    s.consensus = std::move(r.consensus_residual);
    s.reference = std::move(r.shapley);
    s.grand_value = std::move(r.grand_value);
    return s;
}

Series track_core(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& tc)
{
    CoreRun r = core_track(game, graphs, tc);
    Series s;
    s.x_err.assign(r.averaged.begin(), r.averaged.end());
    s.ref_err.assign(r.reference.begin(), r.reference.end());
    s.trajectory = std::move(r.trajectory);
    s.distance = std::move(r.distance_to_reference);
    s.consensus = std::move(r.consensus_residual);
    s.violation = std::move(r.core_violation);
    s.averaged = std::move(r.averaged);
    s.reference = std::move(r.reference);
    s.grand_value = std::move(r.grand_value);
    return s;
}

} // namespace

std::filesystem::path output_root(const RunConfig& cfg)
{
    if (const char* env = std::getenv("COALITIOND_OUT"); env != nullptr && *env != '\0')
        return env;
    return cfg.output_root;
}

DynamicGame build_game(const RunConfig& cfg)
{
    switch (cfg.scenario) {
    case Scenario::forecast: {
        std::vector<ForecastRecord> records;
        if (cfg.input) {
            auto series = ingest_timeseries(require_input(cfg), TimeseriesSchema::forecast, cfg.lead_time_minutes);
            records = truncated(std::get<std::vector<ForecastRecord>>(std::move(series)), cfg.horizon);
        } else {
            ForecastScenario sc;
            sc.n_agents = cfg.n_agents;
            sc.horizon = cfg.horizon;
            sc.smoothness = cfg.smoothness;
            sc.noise = cfg.noise;
            sc.seed = cfg.seed;
            sc.resolution_minutes = cfg.lead_time_minutes.value_or(sc.resolution_minutes);
            records = synthetic_forecast_records(sc);
        }
        return forecast_dynamic_game(records);
    }
    case Scenario::electricity: {
        std::vector<MarketSnapshot> snaps;
        if (cfg.input) {
            auto series = ingest_timeseries(require_input(cfg), TimeseriesSchema::electricity, cfg.lead_time_minutes);
            snaps = std::get<std::vector<MarketSnapshot>>(std::move(series));
        } else {
            ElectricityScenario sc;
            sc.n_agents = cfg.n_agents;
            sc.n_sellers = cfg.n_sellers;
            sc.seed = cfg.seed;
            snaps = synthetic_electricity_snapshots(sc);
            if (cfg.lead_time_minutes && *cfg.lead_time_minutes != sc.source_resolution_minutes)
                snaps = interpolate(snaps, *cfg.lead_time_minutes);
        }
        return electricity_dynamic_game(truncated(std::move(snaps), cfg.horizon));
    }
    case Scenario::synthetic:
        return synthetic_drift_game(cfg.n_agents, cfg.horizon, cfg.drift, cfg.seed);
    case Scenario::custom_game_file: {
        const InstantaneousGame g = load_game(require_input(cfg));
        return DynamicGame(std::vector<InstantaneousGame>(cfg.horizon, g));
    }
    }
    throw InputError("unhandled scenario");
}

RunResult run(const RunConfig& cfg)
{
    if (auto problems = validate(cfg); !problems.empty())
        throw InputError("invalid config: " + problems.front());
    const auto start = std::chrono::steady_clock::now();

    const DynamicGame game = build_game(cfg);
    if (game.horizon() == 0)
        throw InputError("the scenario produced no steps");
    const std::size_t n = game.n_agents();
    const GraphSchedule graphs(n, cfg.network);

    Series s = cfg.tracker == TrackerKind::shapley ? track_shapley(game, graphs, cfg.tracking)
                                                   : track_core(game, graphs, cfg.tracking);

    const CumulativeError cum = mean_cumulative_error(
        s.x_err, s.ref_err, s.grand_value,
        cfg.tracker == TrackerKind::shapley ? ErrorKind::shapley_error : ErrorKind::core_error);
    double total_value = 0.0;
    for (double v : s.grand_value)
        total_value += v;
    const std::vector<double> pd =
        total_value > 0.0 ? payoff_difference(s.averaged, s.reference, total_value) : std::vector<double>(n, 0.0);

    std::string traj = "k,agent,component,value\n";
    for (std::size_t k = 0; k < s.trajectory.size(); ++k)
        for (Eigen::Index i = 0; i < s.trajectory[k].rows(); ++i)
            for (Eigen::Index c = 0; c < s.trajectory[k].cols(); ++c)
                traj += std::to_string(k) + "," + std::to_string(i) + "," + std::to_string(c) + "," +
                        fmt(s.trajectory[k](i, c)) + "\n";

    const std::string err_col = cfg.tracker == TrackerKind::shapley ? "err_shapley" : "err_core_dist";
    std::string errors = "k," + err_col + ",mean_cum_error,consensus_residual,core_violation\n";
    std::size_t cum_idx = 0;
    for (std::size_t k = 0; k < s.trajectory.size(); ++k) {
        std::string mce;
        if (cum_idx < cum.trajectory.points.size() && cum.trajectory.points[cum_idx].k == k)
            mce = fmt(cum.trajectory.points[cum_idx++].value);
        errors += std::to_string(k) + "," + fmt(s.distance[k]) + "," + mce + "," + fmt(s.consensus[k]) + "," +
                  fmt(s.violation[k]) + "\n";
    }

    const std::filesystem::path dir =
        output_root(cfg) / to_string(cfg.scenario) / (cfg.tag.empty() ? utc_stamp() : cfg.tag);
    std::filesystem::create_directories(dir);
    write_file(dir / "trajectory.csv", traj);
    write_file(dir / "errors.csv", errors);

    json manifest = {
        {"config", to_json(cfg)},
        {"coalitiond_version", "0.1.0"},
        {"n_agents", n},
        {"steps", game.horizon()},
        {"files", {"trajectory.csv", "errors.csv", "summary.json", "manifest.json"}},
    };
    if (!graphs.is_static())
        manifest["graph_schedule"] = graphs.to_json(game.horizon());
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json summary = {
        {"scenario", to_string(cfg.scenario)},
        {"tracker", to_string(cfg.tracker)},
        {"alpha", cfg.tracking.alpha},
        {"n_agents", n},
        {"steps", game.horizon()},
        {"terminal_mean_cum_error", cum.trajectory.points.empty() ? json(nullptr) : json(cum.trajectory.back())},
        {"max_payoff_diff", pd.empty() ? 0.0 : *std::max_element(pd.begin(), pd.end())},
        {"payoff_diff", pd},
        {"skipped_steps", cum.skipped},
        {"runtime", runtime},
    };
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return {dir, summary};
}

} // namespace coalitiond::cli
