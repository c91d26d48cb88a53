#include "coalitiond/tracking.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

#include "coalitiond/errors.hpp"

namespace coalitiond {

StepSchedule step_schedule_from_string(const std::string& s)
{
    if (s == "fixed")
        return StepSchedule::fixed;
    if (s == "diminishing")
        return StepSchedule::diminishing;
    throw InputError("unknown step schedule \"" + s + "\" (expected fixed or diminishing)");
}

InitPolicy init_policy_from_string(const std::string& s)
{
    if (s == "self-allocation" || s == "self_allocation")
        return InitPolicy::self_allocation;
    if (s == "zeros")
        return InitPolicy::zeros;
    if (s == "given")
        return InitPolicy::given;
    throw InputError("unknown init policy \"" + s + "\" (expected self-allocation, zeros or given)");
}

ProjectionMethod projection_method_from_string(const std::string& s)
{
    if (s == "dykstra")
        return ProjectionMethod::dykstra;
    if (s == "active-set" || s == "active_set")
        return ProjectionMethod::active_set;
    throw InputError("unknown projection method \"" + s + "\" (expected dykstra or active-set)");
}

std::string to_string(ProjectionMethod m)
{
    return m == ProjectionMethod::dykstra ? "dykstra" : "active-set";
}

std::string to_string(StepSchedule s)
{
    return s == StepSchedule::fixed ? "fixed" : "diminishing";
}

std::string to_string(InitPolicy p)
{
    switch (p) {
    case InitPolicy::self_allocation: return "self-allocation";
    case InitPolicy::zeros: return "zeros";
    case InitPolicy::given: return "given";
    }
    return "unknown";
}

double TrackerConfig::step_size(std::size_t iteration) const
{
    if (schedule == StepSchedule::diminishing)
        return alpha / static_cast<double>(iteration + 1);
    return alpha;
}

std::size_t TrackerConfig::projection_cycles(std::size_t n_agents) const
{
    if (projection_max_iter > 0)
        return projection_max_iter;
    return 10 * (std::size_t{1} << std::min<std::size_t>(n_agents, kMaxDenseAgents));
}

ProjectionSettings TrackerConfig::projection_settings(std::size_t n_agents) const
{
    return {projection, projection_tol, projection_cycles(n_agents), projection_fallback};
}

std::vector<std::string> TrackerConfig::validate(bool for_core) const
{
    std::vector<std::string> out;
    if (!(alpha > 0.0 && alpha < 1.0))
        out.emplace_back("alpha must lie in (0, 1)");
    if (!(gamma_reg >= 0.0) || !std::isfinite(gamma_reg))
        out.emplace_back("gamma_reg must be finite and >= 0");
    if (for_core && alpha * (1.0 + gamma_reg) > 1.0)
        out.emplace_back("alpha * (1 + gamma_reg) must not exceed 1");
    if (!(projection_tol > 0.0))
        out.emplace_back("projection_tol must be > 0");
    if (iterations_per_sample < 1)
        out.emplace_back("iterations_per_sample must be >= 1");
    if (!(tolerance > 0.0))
        out.emplace_back("tolerance must be > 0");
    if (max_iterations < 1)
        out.emplace_back("max_iterations must be >= 1");
    if (init == InitPolicy::given && (initial.rows() == 0 || initial.rows() != initial.cols()))
        out.emplace_back("init policy \"given\" needs a square initial matrix");
    return out;
}

TrackerState initial_state(const InstantaneousGame& first, const TrackerConfig& cfg)
{
    const auto n = static_cast<Eigen::Index>(first.n_agents());
    TrackerState s;
    switch (cfg.init) {
    case InitPolicy::self_allocation:
        s.x = PayoffMatrix::Identity(n, n) * first.grand_value();
        break;
    case InitPolicy::zeros:
        s.x = PayoffMatrix::Zero(n, n);
        break;
    case InitPolicy::given:
        if (cfg.initial.rows() != n || cfg.initial.cols() != n)
            throw InputError("given initial matrix must be " + std::to_string(n) + "x" + std::to_string(n));
        s.x = cfg.initial;
        break;
    }
    s.x_prev = s.x;
    return s;
}

// --- projections -----------------------------------------------------------

PayoffVector halfspace_project(const PayoffVector& x, Coalition s, double rhs)
{
    if (s.is_empty())
        throw InputError("half-space projection needs a non-empty coalition");
    if (s.span() > static_cast<std::size_t>(x.size()))
        throw InputError("coalition " + s.to_string() + " exceeds the vector dimension");
    const double lhs = s.sum(x);
    if (lhs >= rhs)
        return x;
    PayoffVector y = x;
    const double shift = (rhs - lhs) / s.size();
    for (auto j : s.members())
        y[static_cast<Eigen::Index>(j)] += shift;
    return y;
}

PayoffVector hyperplane_project(const PayoffVector& x, double total)
{
    return x.array() + (total - x.sum()) / static_cast<double>(x.size());
}

namespace {

void add_to_members(PayoffVector& y, Coalition s, double amount)
{
    for (Coalition::Mask m = s.mask(); m != 0; m &= m - 1)
        y[std::countr_zero(m)] += amount;
}

} // namespace

PayoffVector project_bounding_set(const PayoffVector& x, const BoundingSet& set, double tol, std::size_t max_iter)
{
    const auto n = static_cast<Eigen::Index>(set.dimension());
    if (x.size() != n)
        throw InputError("point dimension does not match the bounding set");

    // Each Dykstra correction for a set {a.y >= b} or {a.y = b} is a multiple
    // of its normal a = 1_S, so one scalar per constraint suffices.
    const auto& halfs = set.half_spaces();
    std::vector<double> corr(halfs.size(), 0.0);
    double hyper_corr = 0.0;

    PayoffVector y = x;
    PayoffVector cycle_start(n);
    const double nd = static_cast<double>(n);
    for (std::size_t cycle = 0; cycle < max_iter; ++cycle) {
        cycle_start = y;

        // hyperplane: z = y + c 1, project, new correction = z - P(z)
        {
            const double sum_z = y.sum() + hyper_corr * nd;
            const double t = (set.total() - sum_z) / nd;
            y.array() += hyper_corr + t;
            hyper_corr = -t;
        }
        for (std::size_t h = 0; h < halfs.size(); ++h) {
            const Coalition s = halfs[h].members;
            const double size = static_cast<double>(s.size());
            const double lhs = s.sum(y) + corr[h] * size;
            if (lhs >= halfs[h].rhs) {
                if (corr[h] != 0.0) {
                    add_to_members(y, s, corr[h]);
                    corr[h] = 0.0;
                }
            } else {
                const double t = (halfs[h].rhs - lhs) / size;
                add_to_members(y, s, corr[h] + t);
                corr[h] = -t;
            }
        }

        if ((y - cycle_start).norm() <= tol && set.violation(y) <= tol)
            return y;
    }
    throw ConvergenceError("bounding-set projection for agent " + std::to_string(set.owner()) +
                               " did not converge in " + std::to_string(max_iter) + " cycles",
                           PayoffMatrix(y.transpose()), set.violation(y));
}

namespace {

// Dual active-set method (Goldfarb-Idnani with identity Hessian) for
// min ||y - x||^2 s.t. sum(y) = total, sum_{j in S} y_j >= rhs_S.
// Constraint -1 is the equality; its multiplier is free.
PayoffVector active_set_project(const PayoffVector& x, double total, std::span<const BoundingSet::HalfSpace> halfs,
                                double tol, const std::string& label)
{
    const Eigen::Index n = x.size();
    auto normal = [&](long c) {
        PayoffVector a = PayoffVector::Zero(n);
        if (c < 0)
            a.setOnes();
        else
            add_to_members(a, halfs[static_cast<std::size_t>(c)].members, 1.0);
        return a;
    };
    auto gap = [&](long c, const PayoffVector& y) {
        const auto& h = halfs[static_cast<std::size_t>(c)];
        return h.rhs - h.members.sum(y);
    };
    auto violation = [&](const PayoffVector& y) {
        double worst = std::abs(y.sum() - total);
        for (std::size_t h = 0; h < halfs.size(); ++h)
            worst = std::max(worst, gap(static_cast<long>(h), y));
        return worst;
    };

    PayoffVector y = hyperplane_project(x, total);
    std::vector<long> active{-1};
    std::vector<double> mult{0.0};
    const std::size_t max_steps = 4 * (halfs.size() + static_cast<std::size_t>(n)) + 16;

    for (std::size_t step = 0; step < max_steps; ++step) {
        long p = -2;
        double worst = tol;
        for (std::size_t h = 0; h < halfs.size(); ++h) {
            if (const double g = gap(static_cast<long>(h), y); g > worst) {
                worst = g;
                p = static_cast<long>(h);
            }
        }
        if (p == -2)
            return y;

        const PayoffVector np = normal(p);
        double added = 0.0;
        for (;;) {
            const auto m = static_cast<Eigen::Index>(active.size());
            Eigen::MatrixXd na(n, m);
            for (Eigen::Index c = 0; c < m; ++c)
                na.col(c) = normal(active[static_cast<std::size_t>(c)]);
            const Eigen::VectorXd r = na.colPivHouseholderQr().solve(np);
            const PayoffVector z = np - na * r;

            double t2 = std::numeric_limits<double>::infinity();
            std::size_t block = 0;
            for (std::size_t c = 0; c < active.size(); ++c) {
                const double rc = r[static_cast<Eigen::Index>(c)];
                if (active[c] < 0 || rc <= 1e-14)
                    continue;
                if (mult[c] / rc < t2) {
                    t2 = mult[c] / rc;
                    block = c;
                }
            }
            const double zz = z.squaredNorm();
            const double t1 = zz > 1e-14 ? gap(p, y) / zz : std::numeric_limits<double>::infinity();
            const double t = std::min(t1, t2);
            if (!std::isfinite(t))
                throw ConvergenceError(label + " is infeasible", PayoffMatrix(y.transpose()), violation(y));
            y += t * z;
            for (std::size_t c = 0; c < active.size(); ++c)
                mult[c] -= t * r[static_cast<Eigen::Index>(c)];
            added += t;
            if (t1 <= t2) {
                active.push_back(p);
                mult.push_back(added);
                break;
            }
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(block));
            mult.erase(mult.begin() + static_cast<std::ptrdiff_t>(block));
        }
    }
    throw ConvergenceError("active-set projection onto " + label + " did not terminate", PayoffMatrix(y.transpose()),
                           violation(y));
}

} // namespace

PayoffVector project_bounding_set_exact(const PayoffVector& x, const BoundingSet& set, double tol)
{
    if (x.size() != static_cast<Eigen::Index>(set.dimension()))
        throw InputError("point dimension does not match the bounding set");
    return active_set_project(x, set.total(), set.half_spaces(), tol,
                              "bounding set of agent " + std::to_string(set.owner()));
}

PayoffVector project_onto_core(const InstantaneousGame& game, const PayoffVector& x, double tol)
{
    const std::size_t n = game.n_agents();
    if (x.size() != static_cast<Eigen::Index>(n))
        throw InputError("point dimension does not match the game");
    if (n > kMaxDenseAgents)
        throw CapabilityError("core projection enumerates 2^N coalitions; N too large");
    const Coalition::Mask full = Coalition::grand(n).mask();
    std::vector<BoundingSet::HalfSpace> halfs;
    halfs.reserve(full);
    for (Coalition::Mask m = 1; m < full; ++m)
        halfs.push_back({Coalition{m}, game.value(Coalition{m})});
    return active_set_project(x, game.grand_value(), halfs, tol, "core");
}

PayoffVector project_bounding_set(const PayoffVector& x, const BoundingSet& set, const ProjectionSettings& settings)
{
    const std::size_t cycles =
        settings.max_cycles > 0 ? settings.max_cycles : 10 * (std::size_t{1} << std::min(set.dimension(), kMaxDenseAgents));
    if (settings.method == ProjectionMethod::active_set)
        return project_bounding_set_exact(x, set, settings.tol);
    if (!settings.fallback)
        return project_bounding_set(x, set, settings.tol, cycles);
    try {
        return project_bounding_set(x, set, settings.tol, cycles);
    } catch (const ConvergenceError&) {
        return project_bounding_set_exact(x, set, settings.tol);
    }
}

// --- Shapley tracking --------------------------------------------------------

namespace {

double stacked_error(const PayoffMatrix& x, const PayoffVector& phi)
{
    return (x.rowwise() - phi.transpose()).norm();
}

double consensus_residual_of(const PayoffMatrix& x)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
            worst = std::max(worst, (x.row(i) - x.row(j)).norm());
    return worst;
}

void check_square(const TrackerState& s, const WeightMatrix& w)
{
    if (s.x.rows() != s.x.cols() || s.x.rows() != static_cast<Eigen::Index>(w.size()))
        throw InputError("state is " + std::to_string(s.x.rows()) + "x" + std::to_string(s.x.cols()) +
                         ", weights are " + std::to_string(w.size()) + "x" + std::to_string(w.size()));
}

} // namespace

PayoffVector shapley_agent_update(AgentIndex agent, const PayoffMatrix& x, const WeightMatrix& w,
                                  const PayoffVector& marginal, double alpha)
{
    const auto i = static_cast<Eigen::Index>(agent);
    PayoffVector mixed = (w.matrix().row(i) * x).transpose();
    return (1.0 - alpha) * mixed + alpha * marginal;
}

TrackerState shapley_step(const TrackerState& state, const PayoffMatrix& marginals, const WeightMatrix& w,
                          double alpha)
{
    check_square(state, w);
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InputError("step size must lie in (0, 1]");
    if (marginals.rows() != state.x.rows() || marginals.cols() != state.x.cols())
        throw InputError("marginal matrix shape does not match the state");
    TrackerState next;
    next.k = state.k + 1;
    next.x = (1.0 - alpha) * consensus_apply(w, state.x) + alpha * marginals;
    next.x_prev = state.x;
    return next;
}

TrackerState shapley_step(const TrackerState& state, const InstantaneousGame& game, const WeightMatrix& w,
                          const TrackerConfig& cfg)
{
    return shapley_step(state, marginal_matrix(game), w, cfg.step_size(state.k));
}

ShapleyRun shapley_track(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg)
{
    if (auto problems = cfg.validate(); !problems.empty())
        throw InputError("invalid tracker config: " + problems.front());
    if (game.horizon() == 0)
        throw InputError("dynamic game is empty");
    if (graphs.n_agents() != game.n_agents())
        throw InputError("graph schedule and game disagree on the agent count");

    ShapleyRun run;
    TrackerState state = initial_state(game.at(0), cfg);
    run.initial = state.x;
    for (std::size_t k = 0; k < game.horizon(); ++k) {
        const auto& g = game.at(k);
        const PayoffMatrix marginals = marginal_matrix(g);
        for (std::size_t r = 0; r < cfg.iterations_per_sample; ++r)
            state = shapley_step(state, marginals, graphs.weights_at(state.k), cfg.step_size(state.k));
        PayoffVector phi = shapley_exact(g);
        run.error.push_back(stacked_error(state.x, phi));
        run.consensus_residual.push_back(consensus_residual_of(state.x));
        run.grand_value.push_back(g.grand_value());
        run.shapley.push_back(std::move(phi));
        run.trajectory.push_back(state.x);
    }
    return run;
}

StaticRun shapley_static(const InstantaneousGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg)
{
    TrackerConfig c = cfg;
    c.schedule = StepSchedule::diminishing;
    const PayoffVector phi = shapley_exact(game);
    const PayoffMatrix marginals = marginal_matrix(game);
    TrackerState state = initial_state(game, c);

    StaticRun out;
    double err = stacked_error(state.x, phi);
    while (err > c.tolerance) {
        if (state.k >= c.max_iterations)
            throw ConvergenceError("diminishing-step Shapley iteration did not reach tolerance in " +
                                       std::to_string(c.max_iterations) + " iterations",
                                   state.x, err);
        // alpha_k must stay below 1 even when alpha_0 = 1
        const double step = std::min(c.step_size(state.k), 1.0);
        state = shapley_step(state, marginals, graphs.weights_at(state.k), step);
        err = stacked_error(state.x, phi);
    }
    out.x = state.x;
    out.iterations = state.k;
    out.error = err;
    return out;
}

// --- core tracking ---------------------------------------------------------

AgentOperator regularized_projection_operator(std::span<const BoundingSet> sets, double alpha, double gamma_reg,
                                              const ProjectionSettings& projection)
{
    if (!(alpha > 0.0 && alpha <= 1.0) || gamma_reg < 0.0 || alpha * (1.0 + gamma_reg) > 1.0 + 1e-15)
        throw InputError("core operator needs 0 < alpha <= 1, gamma >= 0 and alpha (1 + gamma) <= 1");
    return [sets, alpha, gamma_reg, projection](
               AgentIndex i, const PayoffVector& mixed, const PayoffVector& previous) -> PayoffVector {
        const PayoffVector p = project_bounding_set(mixed, sets[i], projection);
        return (1.0 - alpha - alpha * gamma_reg) * mixed + alpha * p + alpha * gamma_reg * previous;
    };
}

TrackerState core_step_general(const TrackerState& state, const AgentOperator& op, const WeightMatrix& w)
{
    check_square(state, w);
    const PayoffMatrix mixed = consensus_apply(w, state.x);
    TrackerState next;
    next.k = state.k + 1;
    next.x.resize(state.x.rows(), state.x.cols());
    for (Eigen::Index i = 0; i < state.x.rows(); ++i) {
        const PayoffVector row = op(static_cast<AgentIndex>(i), mixed.row(i).transpose(), state.x_prev.row(i).transpose());
        if (row.size() != state.x.cols())
            throw InputError("agent operator returned a vector of the wrong dimension");
        next.x.row(i) = row.transpose();
    }
    next.x_prev = state.x;
    return next;
}

TrackerState core_step(const TrackerState& state, std::span<const BoundingSet> sets, const WeightMatrix& w,
                       double alpha, const TrackerConfig& cfg)
{
    if (sets.size() != static_cast<std::size_t>(state.x.rows()))
        throw InputError("need one bounding set per agent");
    const auto op = regularized_projection_operator(sets, alpha, cfg.gamma_reg, cfg.projection_settings(sets.size()));
    return core_step_general(state, op, w);
}

TrackerState core_step(const TrackerState& state, const InstantaneousGame& game, const WeightMatrix& w,
                       const TrackerConfig& cfg)
{
    const auto sets = bounding_sets(game);
    return core_step(state, sets, w, cfg.step_size(state.k), cfg);
}

PayoffVector core_agent_update(AgentIndex agent, const TrackerState& state, const BoundingSet& set,
                               const WeightMatrix& w, double alpha, const TrackerConfig& cfg)
{
    const auto i = static_cast<Eigen::Index>(agent);
    const PayoffVector mixed = (w.matrix().row(i) * state.x).transpose();
    const PayoffVector p = project_bounding_set(mixed, set, cfg.projection_settings(set.dimension()));
    const double ag = alpha * cfg.gamma_reg;
    return (1.0 - alpha - ag) * mixed + alpha * p + ag * state.x_prev.row(i).transpose();
}

namespace {

double core_violation_of(const InstantaneousGame& game, const PayoffVector& x)
{
    const auto check = core_membership(game, x);
    return std::max({0.0, check.worst_violation, check.efficiency_gap});
}

} // namespace

StaticRun core_static(const InstantaneousGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg)
{
    if (auto problems = cfg.validate(true); !problems.empty())
        throw InputError("invalid tracker config: " + problems.front());
    const auto sets = bounding_sets(game);
    TrackerState state = initial_state(game, cfg);
    StaticRun out;
    for (;;) {
        const double residual = consensus_residual_of(state.x);
        if (residual <= cfg.tolerance) {
            const PayoffVector mean = state.x.colwise().mean().transpose();
            const double violation = core_violation_of(game, mean);
            if (violation <= cfg.tolerance) {
                out.x = state.x;
                out.iterations = state.k;
                out.error = std::max(residual, violation);
                return out;
            }
        }
        if (state.k >= cfg.max_iterations)
            throw ConvergenceError("static core protocol did not converge in " + std::to_string(cfg.max_iterations) +
                                       " iterations",
                                   state.x, residual);
        state = core_step(state, sets, graphs.weights_at(state.k), cfg.step_size(state.k), cfg);
    }
}

CoreRun core_track(const DynamicGame& game, const GraphSchedule& graphs, const TrackerConfig& cfg,
                   CoreTrackOptions options)
{
    if (auto problems = cfg.validate(true); !problems.empty())
        throw InputError("invalid tracker config: " + problems.front());
    if (game.horizon() == 0)
        throw InputError("dynamic game is empty");
    if (graphs.n_agents() != game.n_agents())
        throw InputError("graph schedule and game disagree on the agent count");

    CoreRun run;
    TrackerState state = initial_state(game.at(0), cfg);
    run.initial = state.x;
    for (std::size_t k = 0; k < game.horizon(); ++k) {
        const auto& g = game.at(k);
        const auto sets = bounding_sets(g);
        for (std::size_t r = 0; r < cfg.iterations_per_sample; ++r) {
            try {
                state = core_step(state, sets, graphs.weights_at(state.k), cfg.step_size(state.k), cfg);
            } catch (const ConvergenceError& e) {
                throw ConvergenceError("step " + std::to_string(k) + ": " + e.what(), e.best_iterate(), e.residual());
            }
        }
        PayoffVector avg = state.x.colwise().mean().transpose();
        run.consensus_residual.push_back(consensus_residual_of(state.x));
        run.core_violation.push_back(core_violation_of(g, avg));
        run.grand_value.push_back(g.grand_value());
        if (options.compute_reference) {
            PayoffVector ref;
            try {
                ref = core_reference_point(g, cfg);
            } catch (const ConvergenceError& e) {
                throw ConvergenceError("step " + std::to_string(k) + ": " + e.what(), e.best_iterate(), e.residual());
            }
            run.distance_to_reference.push_back((avg - ref).norm());
            run.reference.push_back(std::move(ref));
        }
        run.averaged.push_back(std::move(avg));
        run.trajectory.push_back(state.x);
    }
    return run;
}

// --- error bounds ------------------------------------------------------------

namespace {

void check_factors(const BoundParams& p)
{
    if (p.contraction_factors.empty())
        throw InputError("bound needs at least one contraction factor");
    for (double l : p.contraction_factors)
        if (!(l > 0.0 && l < 1.0))
            throw InputError("contraction factors must lie in (0, 1)");
    if (!(p.delta >= 0.0) || !std::isfinite(p.delta))
        throw InputError("delta must be finite and >= 0");
}

} // namespace

double theoretical_bound(const BoundParams& params, double initial_error, std::size_t k)
{
    check_factors(params);
    if (k == 0)
        return initial_error;
    const auto& f = params.contraction_factors;
    double prod = 1.0;
    for (std::size_t i = 1; i < k; ++i)
        prod *= f[std::min(i - 1, f.size() - 1)];
    const double l_bar = *std::max_element(f.begin(), f.end());
    const double geometric = (1.0 - std::pow(l_bar, static_cast<double>(k - 1))) / (1.0 - l_bar);
    return prod * initial_error + geometric * params.delta;
}

double theoretical_bound_limit(const BoundParams& params)
{
    check_factors(params);
    const double l_bar = *std::max_element(params.contraction_factors.begin(), params.contraction_factors.end());
    return params.delta / (1.0 - l_bar);
}

double empirical_contraction_factor(const std::function<PayoffMatrix(const PayoffMatrix&)>& op, std::size_t rows,
                                    std::size_t cols, std::size_t pairs, std::uint64_t seed, double scale)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    const auto r = static_cast<Eigen::Index>(rows);
    const auto c = static_cast<Eigen::Index>(cols);
    auto draw = [&] {
        PayoffMatrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                m(i, j) = normal(rng);
        return m;
    };
    double worst = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) {
        const PayoffMatrix x = draw();
        const PayoffMatrix y = draw();
        const double d = (x - y).norm();
        if (d == 0.0)
            continue;
        worst = std::max(worst, (op(x) - op(y)).norm() / d);
    }
    return worst;
}

double measured_variation(std::span<const PayoffMatrix> fixed_points)
{
    double delta = 0.0;
    for (std::size_t k = 1; k < fixed_points.size(); ++k)
        delta = std::max(delta, (fixed_points[k] - fixed_points[k - 1]).norm());
    return delta;
}

} // namespace coalitiond
