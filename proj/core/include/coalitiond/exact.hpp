#pragma once

#include <cstddef>
#include <vector>

#include "coalitiond/game.hpp"

namespace coalitiond {

struct TrackerConfig;

/// Exhaustive Shapley enumeration is limited to N! orderings with N <= 10.
inline constexpr std::size_t kMaxShapleyAgents = 10;
/// Per-agent marginal vectors enumerate (N-1)! orderings, N <= 12.
inline constexpr std::size_t kMaxMarginalAgents = 12;

/// A permutation of {0, ..., N-1}; agents join the coalition in this order.
class Ordering
{
public:
    explicit Ordering(std::vector<AgentIndex> permutation);
    static Ordering identity(std::size_t n);

    std::size_t size() const noexcept { return perm_.size(); }
    AgentIndex operator[](std::size_t pos) const { return perm_[pos]; }
    const std::vector<AgentIndex>& agents() const noexcept { return perm_; }

private:
    std::vector<AgentIndex> perm_;
};

/// Marginal contribution of every agent for one ordering; sums to v(I).
PayoffVector marginal_vector_for_ordering(const InstantaneousGame& game, const Ordering& order);

/// Average marginal vector over the orderings in which `agent` comes first.
/// Only coalitions containing `agent` are queried.
PayoffVector agent_marginal_vector(const InstantaneousGame& game, AgentIndex agent);

/// All N agent marginal vectors stacked as rows.
PayoffMatrix marginal_matrix(const InstantaneousGame& game);

/// Shapley value by enumerating all N! orderings (Heap's algorithm).
PayoffVector shapley_exact(const InstantaneousGame& game);

struct CoreCheck
{
    bool in_core = false;
    /// max over non-empty S of v(S) - x(S); <= 0 when every coalition is satisfied.
    double worst_violation = 0.0;
    Coalition worst_coalition;
    /// |sum(x) - v(I)|
    double efficiency_gap = 0.0;
};

CoreCheck core_membership(const InstantaneousGame& game, const PayoffVector& x, double tol = 1e-9);

/**
 * \brief Agent i's slice of the core constraints.
 *
 * The equality sum(x) = v(I) plus one half-space x(S) >= v(S) for every
 * proper coalition S containing the owner, in ascending mask order.
 * Values are copied at construction so the set outlives the game.
 */
class BoundingSet
{
public:
    struct HalfSpace
    {
        Coalition members;
        double rhs;
    };

    BoundingSet(const InstantaneousGame& game, AgentIndex owner);

    AgentIndex owner() const noexcept { return owner_; }
    std::size_t dimension() const noexcept { return n_; }
    double total() const noexcept { return total_; }
    const std::vector<HalfSpace>& half_spaces() const noexcept { return half_spaces_; }

    /// Largest constraint violation of x (0 if x lies in the set).
    double violation(const PayoffVector& x) const;

private:
    AgentIndex owner_;
    std::size_t n_;
    double total_;
    std::vector<HalfSpace> half_spaces_;
};

std::vector<BoundingSet> bounding_sets(const InstantaneousGame& game);

/// Runs the static core protocol on a complete graph from the self-allocation
/// start until consensus and core feasibility both reach `cfg.tolerance`.
/// After `cfg.reference_max_iterations` the mean is projected onto the core
/// (`cfg.reference_polish`); ConvergenceError if that fails or polishing is off.
PayoffVector core_reference_point(const InstantaneousGame& game, const TrackerConfig& cfg);

} // namespace coalitiond
