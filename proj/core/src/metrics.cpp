#include "coalitiond/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "coalitiond/errors.hpp"
#include "coalitiond/exact.hpp"
#include "coalitiond/markets.hpp"
#include "coalitiond/network.hpp"
#include "coalitiond/tracking.hpp"

namespace coalitiond {

std::string to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::shapley_error: return "shapley_error";
    case ErrorKind::core_error: return "core_error";
    case ErrorKind::consensus_residual: return "consensus_residual";
    case ErrorKind::core_violation: return "core_violation";
    case ErrorKind::payoff_diff: return "payoff_diff";
    }
    return "unknown";
}

void ErrorSeries::push(std::size_t k, double value)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw InputError(to_string(kind) + " value at step " + std::to_string(k) + " must be finite and >= 0");
    points.push_back({k, value});
}

CumulativeError mean_cumulative_error(std::span<const Eigen::VectorXd> x, std::span<const Eigen::VectorXd> ref,
                                      std::span<const double> grand_values, ErrorKind kind)
{
    if (x.size() != ref.size() || x.size() != grand_values.size())
        throw InputError("trajectory, reference and grand values must have the same length");
    CumulativeError out;
    out.trajectory.kind = kind;
    double total = 0.0;
    std::size_t counted = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].size() != ref[k].size())
            throw InputError("step " + std::to_string(k) + ": trajectory and reference differ in length");
        if (!(grand_values[k] > 0.0)) {
            out.skipped.push_back(k);
            continue;
        }
        total += (x[k] - ref[k]).norm() / grand_values[k];
        ++counted;
        out.trajectory.push(k, total / static_cast<double>(counted));
    }
    return out;
}

std::vector<double> payoff_difference(std::span<const PayoffVector> x, std::span<const PayoffVector> ref,
                                      double total_value)
{
    if (x.size() != ref.size())
        throw InputError("payoff trajectories must have aligned horizons");
    if (x.empty())
        return {};
    if (!(total_value > 0.0))
        throw InputError("total market value must be > 0");
    PayoffVector diff = PayoffVector::Zero(x.front().size());
    for (std::size_t k = 0; k < x.size(); ++k)
        diff += x[k] - ref[k];
    std::vector<double> out(static_cast<std::size_t>(diff.size()));
    for (Eigen::Index i = 0; i < diff.size(); ++i)
        out[static_cast<std::size_t>(i)] = std::abs(diff[i]) / total_value;
    return out;
}

double consensus_residual(const PayoffMatrix& x)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
            worst = std::max(worst, (x.row(i) - x.row(j)).norm());
    return worst;
}

Eigen::VectorXd stacked(const PayoffMatrix& x)
{
    Eigen::VectorXd v(x.size());
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            v[p++] = x(i, j);
    return v;
}

Eigen::VectorXd stacked_consensus(const PayoffVector& phi)
{
    return stacked(PayoffMatrix(phi.transpose().replicate(phi.size(), 1)));
}

namespace {

template <typename F>
double median_seconds(std::size_t reps, F&& f)
{
    std::vector<double> t;
    t.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f(r);
        const auto stop = std::chrono::steady_clock::now();
        t.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(t.begin(), t.end());
    const std::size_t m = t.size() / 2;
    return t.size() % 2 == 1 ? t[m] : 0.5 * (t[m - 1] + t[m]);
}

// Keeps results observable so the timed calls are not optimized away.
volatile double g_sink = 0.0;

constexpr std::size_t kBenchmarkSnapshots = 8;

} // namespace

std::vector<StepCost> benchmark_step_cost(std::span<const std::size_t> n_range, BenchmarkScenario scenario,
                                          std::size_t repetitions, std::uint64_t seed)
{
    repetitions = std::max<std::size_t>(repetitions, 10);
    std::vector<StepCost> table;
    TrackerConfig cfg;
    for (std::size_t n : n_range) {
        StepCost row{n, 0.0, 0.0};
        const WeightMatrix w = metropolis_weights(Graph::complete(n));
        if (scenario == BenchmarkScenario::electricity_core) {
            // Reference iteration counts vary strongly between snapshots, so repetitions cycle through a
            // fixed sample of them. Both columns use the reference's projection routine.
            TrackerConfig core_cfg = cfg;
            core_cfg.projection = ProjectionMethod::active_set;
            ElectricityScenario sc;
            sc.n_agents = n;
            sc.n_sellers = n / 2;
            sc.source_steps = kBenchmarkSnapshots;
            sc.seed = seed;
            std::vector<InstantaneousGame> games;
            std::vector<TrackerState> states;
            for (const auto& snapshot : synthetic_electricity_snapshots(sc)) {
                games.push_back(snapshot_to_game(snapshot));
                states.push_back(initial_state(games.back(), core_cfg));
            }
            const std::size_t m = games.size();
            row.online_step_seconds = median_seconds(repetitions, [&](std::size_t r) {
                const BoundingSet set(games[r % m], 0);
                g_sink = core_agent_update(0, states[r % m], set, w, core_cfg.alpha, core_cfg)[0];
            });
            row.exact_solution_seconds = median_seconds(repetitions, [&](std::size_t r) {
                g_sink = core_reference_point(games[r % m], core_cfg)[0];
            });
        } else {
            const auto game = synthetic_forecast_scenario(n, 1, 100.0, 0.05, seed).at(0);
            const TrackerState state = initial_state(game, cfg);
            row.online_step_seconds = median_seconds(repetitions, [&](std::size_t) {
                const PayoffVector m = agent_marginal_vector(game, 0);
                g_sink = shapley_agent_update(0, state.x, w, m, cfg.alpha)[0];
            });
            row.exact_solution_seconds = median_seconds(repetitions, [&](std::size_t) { g_sink = shapley_exact(game)[0]; });
        }
        table.push_back(row);
    }
    return table;
}

} // namespace coalitiond
