#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalitiond/exact.hpp"
#include "coalitiond/game.hpp"
#include "coalitiond/network.hpp"

namespace coalitiond {

enum class StepSchedule
{
    fixed,
    /// alpha_k = alpha / (k + 1)
    diminishing,
};

enum class InitPolicy
{
    /// x_i^0 = v(I) e_i
    self_allocation,
    zeros,
    /// TrackerConfig::initial
    given,
};

enum class ProjectionMethod
{
    dykstra,
    /// Exact dual active-set solve.
    active_set,
};

StepSchedule step_schedule_from_string(const std::string& s);
ProjectionMethod projection_method_from_string(const std::string& s);
std::string to_string(ProjectionMethod m);
InitPolicy init_policy_from_string(const std::string& s);
std::string to_string(StepSchedule s);
std::string to_string(InitPolicy p);

struct ProjectionSettings
{
    ProjectionMethod method = ProjectionMethod::dykstra;
    double tol = 1e-9;
    /// 0 selects 10 * 2^N.
    std::size_t max_cycles = 0;
    bool fallback = true;
};

struct TrackerConfig
{
    double alpha = 0.1;
    /// Weight of the proximity term to the agent's own previous proposal.
    double gamma_reg = 0.1;
    StepSchedule schedule = StepSchedule::fixed;
    InitPolicy init = InitPolicy::self_allocation;
    PayoffMatrix initial;

    ProjectionMethod projection = ProjectionMethod::dykstra;
    double projection_tol = 1e-9;
    /// 0 selects 10 * 2^N Dykstra cycles.
    std::size_t projection_max_iter = 0;
    /// Switch to the exact active-set projection when Dykstra exhausts its cycles.
    bool projection_fallback = true;
    std::size_t iterations_per_sample = 1;

    /// Stopping tolerance for static runs (reference points, diminishing-step runs).
    double tolerance = 1e-6;
    std::size_t max_iterations = 100000;

    /// Protocol budget of core_reference_point.
    std::size_t reference_max_iterations = 2000;
    /// On budget exhaustion, project the protocol's mean onto the core instead of failing.
    bool reference_polish = true;

    double step_size(std::size_t iteration) const;
    std::size_t projection_cycles(std::size_t n_agents) const;
    ProjectionSettings projection_settings(std::size_t n_agents) const;

    /// Violations of the parameter invariants. `for_core` adds alpha(1 + gamma) <= 1.
    std::vector<std::string> validate(bool for_core = false) const;
};

struct TrackerState
{
    std::size_t k = 0;
    PayoffMatrix x;
    /// x^{k-1}; equal to x at k = 0.
    PayoffMatrix x_prev;
};

TrackerState initial_state(const InstantaneousGame& first, const TrackerConfig& cfg);

// --- projections -----------------------------------------------------------

/// Projection onto {y : sum_{j in S} y_j >= rhs}.
PayoffVector halfspace_project(const PayoffVector& x, Coalition s, double rhs);

/// Projection onto {y : sum(y) = total}.
PayoffVector hyperplane_project(const PayoffVector& x, double total);

/// Euclidean projection onto the bounding set by Dykstra's method.
/// Throws ConvergenceError (best iterate as a 1-row matrix) after `max_iter` cycles.
PayoffVector project_bounding_set(const PayoffVector& x, const BoundingSet& set, double tol, std::size_t max_iter);

/// Exact projection by a dual active-set method; feasible to `tol`.
PayoffVector project_bounding_set_exact(const PayoffVector& x, const BoundingSet& set, double tol);

/// Euclidean projection onto the core by the active-set method.
/// Throws ConvergenceError when the core is empty.
PayoffVector project_onto_core(const InstantaneousGame& game, const PayoffVector& x, double tol = 1e-9);

/// Dykstra, finishing with the active-set method if `fallback` and the cycle budget runs out.
PayoffVector project_bounding_set(const PayoffVector& x, const BoundingSet& set, const ProjectionSettings& settings);

// --- Shapley tracking --------------------------------------------------------

/// One agent's update: (1 - alpha) sum_j w_ij x_j + alpha * marginal.
PayoffVector shapley_agent_update(AgentIndex agent, const PayoffMatrix& x, const WeightMatrix& w,
                                  const PayoffVector& marginal, double alpha);

TrackerState shapley_step(const TrackerState& state, const PayoffMatrix& marginals, const WeightMatrix& w,
                          double alpha);
TrackerState shapley_step(const TrackerState& state, const InstantaneousGame& game, const WeightMatrix& w,
                          const TrackerConfig& cfg);

struct ShapleyRun
{
    PayoffMatrix initial;
    /// Proposals after processing sample k.
    std::vector<PayoffMatrix> trajectory;
    std::vector<PayoffVector> shapley;
    /// ||x^k - 1 (x) phi^k|| (Frobenius norm of the stacked difference).
    std::vector<double> error;
    std::vector<double> consensus_residual;
    std::vector<double> grand_value;
};

ShapleyRun shapley_track(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg);

struct StaticRun
{
    PayoffMatrix x;
    std::size_t iterations = 0;
    double error = 0.0;
};

/// Diminishing-step iteration on a fixed game until ||x - Phi|| <= cfg.tolerance.
StaticRun shapley_static(const InstantaneousGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg);

// --- core tracking ---------------------------------------------------------

/// T_i: (agent, mixed proposal x_hat_i, own previous proposal) -> new proposal.
using AgentOperator = std::function<PayoffVector(AgentIndex, const PayoffVector&, const PayoffVector&)>;

/// (1 - a - a g) x_hat + a proj_X_i(x_hat) + a g x_prev. Captures `sets` by view.
AgentOperator regularized_projection_operator(std::span<const BoundingSet> sets, double alpha, double gamma_reg,
                                              const ProjectionSettings& projection);

/// x^{k+1} = T(W x^k), one operator call per agent.
TrackerState core_step_general(const TrackerState& state, const AgentOperator& op, const WeightMatrix& w);

TrackerState core_step(const TrackerState& state, std::span<const BoundingSet> sets, const WeightMatrix& w,
                       double alpha, const TrackerConfig& cfg);
TrackerState core_step(const TrackerState& state, const InstantaneousGame& game, const WeightMatrix& w,
                       const TrackerConfig& cfg);

/// One agent's share of a core step.
PayoffVector core_agent_update(AgentIndex agent, const TrackerState& state, const BoundingSet& set,
                               const WeightMatrix& w, double alpha, const TrackerConfig& cfg);

struct CoreRun
{
    PayoffMatrix initial;
    std::vector<PayoffMatrix> trajectory;
    /// Averaged proposal (1/N) sum_i x_i after sample k.
    std::vector<PayoffVector> averaged;
    std::vector<double> consensus_residual;
    /// Worst core-constraint violation of the averaged proposal (>= 0).
    std::vector<double> core_violation;
    std::vector<PayoffVector> reference;
    /// ||averaged^k - reference^k||; empty when no reference was computed.
    std::vector<double> distance_to_reference;
    std::vector<double> grand_value;
};

struct CoreTrackOptions
{
    bool compute_reference = true;
};

CoreRun core_track(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg,
                   CoreTrackOptions options = {});

/// Static protocol run until consensus residual and core violation are within cfg.tolerance.
StaticRun core_static(const InstantaneousGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg);

// --- error bounds ------------------------------------------------------------

struct BoundParams
{
    double delta = 0.0;
    /// L_1, L_2, ...; the last factor repeats when more steps are requested.
    std::vector<double> contraction_factors;
};

/// Lhat_k e_0 + (1 - Lbar^{k-1}) / (1 - Lbar) * delta, Lhat_k = prod_{i<k} L_i, Lbar = max L_i.
double theoretical_bound(const BoundParams& params, double initial_error, std::size_t k);

/// k -> infinity limit: delta / (1 - Lbar).
double theoretical_bound_limit(const BoundParams& params);

/// Largest ||op(x) - op(y)|| / ||x - y|| over random pairs of rows x cols matrices.
double empirical_contraction_factor(const std::function<PayoffMatrix(const PayoffMatrix&)>& op, std::size_t rows,
                                    std::size_t cols, std::size_t pairs, std::uint64_t seed, double scale = 1.0);

/// max over k of ||a^{k+1} - a^k|| (stacked Frobenius norm).
double measured_variation(std::span<const PayoffMatrix> fixed_points);

} // namespace coalitiond
