#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "coalitiond/game.hpp"

namespace coalitiond {

/// Undirected communication graph over agents 0..n-1.
class Graph
{
public:
    using Edge = std::pair<AgentIndex, AgentIndex>;

    explicit Graph(std::size_t n);
    Graph(std::size_t n, const std::vector<Edge>& edges);

    static Graph complete(std::size_t n);
    static Graph path(std::size_t n);
    static Graph ring(std::size_t n);

    /// Adds (i, j); stored with i < j. Self-loops and out-of-range ends throw.
    void add_edge(AgentIndex i, AgentIndex j);

    std::size_t size() const noexcept { return n_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::vector<std::size_t> degrees() const;
    bool is_connected() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::size_t n_;
    std::set<Edge> edges_;
};

/// Symmetric doubly stochastic mixing matrix.
class WeightMatrix
{
public:
    explicit WeightMatrix(Eigen::MatrixXd w);

    const Eigen::MatrixXd& matrix() const noexcept { return w_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return w_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

    /// Smallest strictly positive entry.
    double gamma_min() const;

    /// Violations of symmetry, double stochasticity and positive diagonal; empty when all hold.
    std::vector<std::string> check(double tol = 1e-12) const;

private:
    Eigen::MatrixXd w_;
};

/// w_ij = 1 / (1 + max(d_i, d_j)) on edges, remaining mass on the diagonal.
WeightMatrix metropolis_weights(const Graph& g);

/// Erdos-Renyi draw, redrawn until connected (at most 1000 attempts).
Graph random_connected_graph(std::size_t n, double edge_prob, std::uint64_t seed);

/// Row i of the result is sum_j w_ij * row j of x.
PayoffMatrix consensus_apply(const WeightMatrix& w, const PayoffMatrix& x);

enum class Topology { complete, path, ring, random };

Topology topology_from_string(const std::string& s);
std::string to_string(Topology t);

struct NetworkSpec
{
    Topology topology = Topology::complete;
    double edge_prob = 0.5;
    /// Redraw a random graph at every step (only meaningful for Topology::random).
    bool time_varying = false;
    std::uint64_t seed = 0;
};

/// The sequence of graphs G^k and their Metropolis weights.
class GraphSchedule
{
public:
    GraphSchedule(std::size_t n, NetworkSpec spec);
    static GraphSchedule complete(std::size_t n) { return {n, NetworkSpec{}}; }

    std::size_t n_agents() const noexcept { return n_; }
    const NetworkSpec& spec() const noexcept { return spec_; }
    bool is_static() const noexcept { return !(spec_.time_varying && spec_.topology == Topology::random); }

    Graph graph_at(std::size_t k) const;
    WeightMatrix weights_at(std::size_t k) const;

    /// [{"k": 0, "edges": [[i, j], ...]}, ...] for steps 0..steps-1.
    nlohmann::json to_json(std::size_t steps) const;

private:
    std::size_t n_;
    NetworkSpec spec_;
    Graph base_;
    WeightMatrix base_weights_;
};

/// Per-step seed for time-varying schedules.
std::uint64_t step_seed(std::uint64_t master_seed, std::size_t k);

} // namespace coalitiond
