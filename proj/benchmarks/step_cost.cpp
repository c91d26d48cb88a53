#include <vector>

#include <benchmark/benchmark.h>

#include <coalitiond/exact.hpp>
#include <coalitiond/markets.hpp>
#include <coalitiond/network.hpp>
#include <coalitiond/tracking.hpp>

using namespace coalitiond;

namespace {

InstantaneousGame forecast_game(std::size_t n)
{
    return synthetic_forecast_scenario(n, 1, 100.0, 0.05, 0).at(0);
}

InstantaneousGame electricity_game(std::size_t n)
{
    ElectricityScenario sc;
    sc.n_agents = n;
    sc.n_sellers = n / 2;
    sc.source_steps = 3;
    return snapshot_to_game(synthetic_electricity_snapshots(sc)[1]);
}

void BM_ShapleyExact(benchmark::State& state)
{
    const auto game = forecast_game(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(shapley_exact(game));
}

void BM_AgentMarginalVector(benchmark::State& state)
{
    const auto game = forecast_game(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(agent_marginal_vector(game, 0));
}

void BM_ShapleyStep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto game = forecast_game(n);
    const TrackerConfig cfg;
    const TrackerState start = initial_state(game, cfg);
    const PayoffMatrix marginals = marginal_matrix(game);
    const WeightMatrix w = metropolis_weights(Graph::ring(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(shapley_step(start, marginals, w, cfg.alpha));
}

void BM_ProjectBoundingSet(benchmark::State& state, ProjectionMethod method)
{
    const auto game = electricity_game(static_cast<std::size_t>(state.range(0)));
    TrackerConfig cfg;
    cfg.projection = method;
    const BoundingSet set(game, 0);
    const PayoffVector x = PayoffVector::Zero(static_cast<Eigen::Index>(game.n_agents()));
    const ProjectionSettings settings = cfg.projection_settings(game.n_agents());
    for (auto _ : state)
        benchmark::DoNotOptimize(project_bounding_set(x, set, settings));
}

void BM_CoreStep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto game = electricity_game(n);
    TrackerConfig cfg;
    cfg.projection = ProjectionMethod::active_set;
    const TrackerState start = initial_state(game, cfg);
    const std::vector<BoundingSet> sets = bounding_sets(game);
    const WeightMatrix w = metropolis_weights(Graph::complete(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(core_step(start, sets, w, cfg.alpha, cfg));
}

void BM_CoreReferencePoint(benchmark::State& state)
{
    const auto game = electricity_game(static_cast<std::size_t>(state.range(0)));
    const TrackerConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(core_reference_point(game, cfg));
}

} // namespace

BENCHMARK(BM_ShapleyExact)->DenseRange(4, 10, 2);
BENCHMARK(BM_AgentMarginalVector)->DenseRange(4, 10, 2);
BENCHMARK(BM_ShapleyStep)->DenseRange(4, 10, 2);
BENCHMARK_CAPTURE(BM_ProjectBoundingSet, dykstra, ProjectionMethod::dykstra)->DenseRange(4, 10, 2);
BENCHMARK_CAPTURE(BM_ProjectBoundingSet, active_set, ProjectionMethod::active_set)->DenseRange(4, 10, 2);
BENCHMARK(BM_CoreStep)->DenseRange(4, 10, 2);
BENCHMARK(BM_CoreReferencePoint)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
