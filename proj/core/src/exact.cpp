#include "coalitiond/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalitiond/errors.hpp"
#include "coalitiond/tracking.hpp"
#include "permutations.hpp"

namespace coalitiond {

Ordering::Ordering(std::vector<AgentIndex> permutation) : perm_(std::move(permutation))
{
    std::vector<bool> seen(perm_.size(), false);
    for (auto a : perm_) {
        if (a >= perm_.size() || seen[a])
            throw InputError("ordering is not a permutation of 0.." + std::to_string(perm_.size() - 1));
        seen[a] = true;
    }
}

Ordering Ordering::identity(std::size_t n)
{
    std::vector<AgentIndex> p(n);
    std::iota(p.begin(), p.end(), AgentIndex{0});
    return Ordering(std::move(p));
}

namespace {

// Adds the marginal vector of `order` into `acc`.
void accumulate_marginals(const InstantaneousGame& game, const std::vector<AgentIndex>& order, PayoffVector& acc)
{
    Coalition prefix;
    double before = 0.0;
    for (auto j : order) {
        prefix = prefix.with(j);
        const double after = game.value(prefix);
        acc[static_cast<Eigen::Index>(j)] += after - before;
        before = after;
    }
}

} // namespace

PayoffVector marginal_vector_for_ordering(const InstantaneousGame& game, const Ordering& order)
{
    if (order.size() != game.n_agents())
        throw InputError("ordering has " + std::to_string(order.size()) + " agents, game has " +
                         std::to_string(game.n_agents()));
    PayoffVector m = PayoffVector::Zero(static_cast<Eigen::Index>(game.n_agents()));
    accumulate_marginals(game, order.agents(), m);
    return m;
}

PayoffVector agent_marginal_vector(const InstantaneousGame& game, AgentIndex agent)
{
    const std::size_t n = game.n_agents();
    if (agent >= n)
        throw InputError("agent " + std::to_string(agent) + " out of range");
    if (n > kMaxMarginalAgents)
        throw CapabilityError("marginal vectors enumerate (N-1)! orderings; N=" + std::to_string(n) +
                              " exceeds the cap of " + std::to_string(kMaxMarginalAgents));

    std::vector<AgentIndex> order(n);
    std::iota(order.begin(), order.end(), AgentIndex{0});
    std::swap(order[0], order[agent]);
    std::vector<AgentIndex> rest(order.begin() + 1, order.end());

    PayoffVector acc = PayoffVector::Zero(static_cast<Eigen::Index>(n));
    detail::for_each_permutation(rest, [&](const std::vector<AgentIndex>& tail) {
        std::copy(tail.begin(), tail.end(), order.begin() + 1);
        accumulate_marginals(game, order, acc);
    });
    return acc / detail::factorial(n - 1);
}

PayoffMatrix marginal_matrix(const InstantaneousGame& game)
{
    const auto n = static_cast<Eigen::Index>(game.n_agents());
    PayoffMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m.row(i) = agent_marginal_vector(game, static_cast<AgentIndex>(i)).transpose();
    return m;
}

PayoffVector shapley_exact(const InstantaneousGame& game)
{
    const std::size_t n = game.n_agents();
    if (n > kMaxShapleyAgents)
        throw CapabilityError("exact Shapley enumerates N! orderings; N=" + std::to_string(n) +
                              " exceeds the cap of " + std::to_string(kMaxShapleyAgents));
    std::vector<AgentIndex> order(n);
    std::iota(order.begin(), order.end(), AgentIndex{0});
    PayoffVector acc = PayoffVector::Zero(static_cast<Eigen::Index>(n));
    detail::for_each_permutation(order, [&](const std::vector<AgentIndex>& p) { accumulate_marginals(game, p, acc); });
    return acc / detail::factorial(n);
}

CoreCheck core_membership(const InstantaneousGame& game, const PayoffVector& x, double tol)
{
    const std::size_t n = game.n_agents();
    if (static_cast<std::size_t>(x.size()) != n)
        throw InputError("payoff vector has " + std::to_string(x.size()) + " entries, game has " + std::to_string(n) +
                         " agents");
    CoreCheck out;
    out.efficiency_gap = std::abs(x.sum() - game.grand_value());
    out.worst_violation = -std::numeric_limits<double>::infinity();
    const Coalition::Mask full = Coalition::grand(n).mask();
    for (Coalition::Mask m = 1; m <= full; ++m) {
        const Coalition s{m};
        const double gap = game.value(s) - s.sum(x);
        if (gap > out.worst_violation) {
            out.worst_violation = gap;
            out.worst_coalition = s;
        }
    }
    out.in_core = out.efficiency_gap <= tol && out.worst_violation <= tol;
    return out;
}

BoundingSet::BoundingSet(const InstantaneousGame& game, AgentIndex owner)
    : owner_(owner)
    , n_(game.n_agents())
    , total_(game.grand_value())
{
    if (owner >= n_)
        throw InputError("bounding set owner " + std::to_string(owner) + " out of range");
    if (n_ > kMaxDenseAgents)
        throw CapabilityError("bounding sets enumerate 2^(N-1) coalitions; N too large");
    const Coalition::Mask full = Coalition::grand(n_).mask();
    half_spaces_.reserve((std::size_t{1} << (n_ - 1)) - 1);
    for (Coalition::Mask m = 1; m < full; ++m) {
        const Coalition s{m};
        if (s.contains(owner))
            half_spaces_.push_back({s, game.value(s)});
    }
}

double BoundingSet::violation(const PayoffVector& x) const
{
    double worst = std::abs(x.sum() - total_);
    for (const auto& h : half_spaces_)
        worst = std::max(worst, h.rhs - h.members.sum(x));
    return worst;
}

std::vector<BoundingSet> bounding_sets(const InstantaneousGame& game)
{
    std::vector<BoundingSet> sets;
    sets.reserve(game.n_agents());
    for (AgentIndex i = 0; i < game.n_agents(); ++i)
        sets.emplace_back(game, i);
    return sets;
}

PayoffVector core_reference_point(const InstantaneousGame& game, const TrackerConfig& cfg)
{
    TrackerConfig static_cfg = cfg;
    static_cfg.init = InitPolicy::self_allocation;
    static_cfg.schedule = StepSchedule::fixed;
    static_cfg.projection = ProjectionMethod::active_set;
    static_cfg.max_iterations = cfg.reference_max_iterations;
    try {
        const StaticRun run = core_static(game, GraphSchedule::complete(game.n_agents()), static_cfg);
        return run.x.colwise().mean().transpose();
    } catch (const ConvergenceError& e) {
        if (cfg.reference_polish) {
            try {
                return project_onto_core(game, e.best_iterate().colwise().mean().transpose(), cfg.tolerance * 1e-3);
            } catch (const ConvergenceError&) {
            }
        }
        throw ConvergenceError(std::string("core reference point did not converge (possibly empty core or "
                                           "too-loose contraction): ") +
                                   e.what(),
                               e.best_iterate(), e.residual());
    }
}

} // namespace coalitiond
