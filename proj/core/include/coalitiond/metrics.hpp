#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coalitiond/game.hpp"

namespace coalitiond {

enum class ErrorKind { shapley_error, core_error, consensus_residual, core_violation, payoff_diff };

std::string to_string(ErrorKind kind);

struct ErrorSeries
{
    struct Point
    {
        std::size_t k;
        double value;
    };

    ErrorKind kind;
    std::vector<Point> points;

    /// Throws InputError on negative or non-finite values.
    void push(std::size_t k, double value);
    double back() const { return points.back().value; }
};

struct CumulativeError
{
    /// Running mean of ||(x^k - ref^k) / v^k(I)|| over the non-skipped steps.
    ErrorSeries trajectory{ErrorKind::shapley_error, {}};
    /// Steps with v^k(I) <= 0, left out of the mean.
    std::vector<std::size_t> skipped;
};

/// `x[k]` and `ref[k]` are stacked vectors (any equal length per step).
CumulativeError mean_cumulative_error(std::span<const Eigen::VectorXd> x, std::span<const Eigen::VectorXd> ref,
                                      std::span<const double> grand_values, ErrorKind kind = ErrorKind::shapley_error);

/// Per agent |sum_k x_i^k - sum_k ref_i^k| / sum_k v^k(I).
std::vector<double> payoff_difference(std::span<const PayoffVector> x, std::span<const PayoffVector> ref,
                                      double total_value);

/// max_{i,j} ||x_i - x_j|| over the rows.
double consensus_residual(const PayoffMatrix& x);

/// Row-major flattening of a payoff matrix.
Eigen::VectorXd stacked(const PayoffMatrix& x);

/// 1_N (x) phi flattened: phi repeated once per agent.
Eigen::VectorXd stacked_consensus(const PayoffVector& phi);

enum class BenchmarkScenario { electricity_core, forecast_shapley };

struct StepCost
{
    std::size_t n_agents;
    /// Median time of one agent's online update.
    double online_step_seconds;
    /// Median time of the exact solution (core reference point or exact Shapley value).
    double exact_solution_seconds;
};

std::vector<StepCost> benchmark_step_cost(std::span<const std::size_t> n_range, BenchmarkScenario scenario,
                                          std::size_t repetitions = 10, std::uint64_t seed = 0);

} // namespace coalitiond
