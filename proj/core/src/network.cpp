#include "coalitiond/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <nlohmann/json.hpp>

#include "coalitiond/errors.hpp"

namespace coalitiond {

Graph::Graph(std::size_t n) : n_(n)
{
    if (n == 0)
        throw InputError("graph needs at least one node");
}

Graph::Graph(std::size_t n, const std::vector<Edge>& edges) : Graph(n)
{
    for (auto [i, j] : edges)
        add_edge(i, j);
}

Graph Graph::complete(std::size_t n)
{
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            g.edges_.emplace(i, j);
    return g;
}

Graph Graph::path(std::size_t n)
{
    Graph g(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        g.edges_.emplace(i, i + 1);
    return g;
}

Graph Graph::ring(std::size_t n)
{
    Graph g = path(n);
    if (n > 2)
        g.edges_.emplace(0, n - 1);
    return g;
}

void Graph::add_edge(AgentIndex i, AgentIndex j)
{
    if (i == j)
        throw InputError("self-loop on node " + std::to_string(i));
    if (i >= n_ || j >= n_)
        throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside a graph of " +
                         std::to_string(n_) + " nodes");
    edges_.emplace(std::min(i, j), std::max(i, j));
}

std::vector<std::size_t> Graph::degrees() const
{
    std::vector<std::size_t> d(n_, 0);
    for (auto [i, j] : edges_) {
        ++d[i];
        ++d[j];
    }
    return d;
}

bool Graph::is_connected() const
{
    std::vector<std::vector<AgentIndex>> adj(n_);
    for (auto [i, j] : edges_) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> seen(n_, false);
    std::queue<AgentIndex> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        auto u = frontier.front();
        frontier.pop();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n_;
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd w) : w_(std::move(w))
{
    if (w_.rows() != w_.cols() || w_.rows() == 0)
        throw InputError("weight matrix must be square and non-empty");
}

double WeightMatrix::gamma_min() const
{
    double g = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < w_.rows(); ++i)
        for (Eigen::Index j = 0; j < w_.cols(); ++j)
            if (w_(i, j) > 0.0)
                g = std::min(g, w_(i, j));
    return g;
}

std::vector<std::string> WeightMatrix::check(double tol) const
{
    std::vector<std::string> out;
    const Eigen::Index n = w_.rows();
    if ((w_ - w_.transpose()).cwiseAbs().maxCoeff() > tol)
        out.emplace_back("not symmetric");
    if ((w_.rowwise().sum().array() - 1.0).abs().maxCoeff() > tol)
        out.emplace_back("row sums differ from 1");
    if ((w_.colwise().sum().array() - 1.0).abs().maxCoeff() > tol)
        out.emplace_back("column sums differ from 1");
    if (w_.minCoeff() < -tol)
        out.emplace_back("negative entry");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (w_(i, i) <= 0.0) {
            out.emplace_back("non-positive diagonal");
            break;
        }
    }
    return out;
}

WeightMatrix metropolis_weights(const Graph& g)
{
    if (!g.is_connected())
        throw InputError("metropolis weights need a connected graph");
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto deg = g.degrees();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : g.edges()) {
        const double wij = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = wij;
        w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = wij;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        w(i, i) = 1.0 - w.row(i).sum();
    return WeightMatrix(std::move(w));
}

Graph random_connected_graph(std::size_t n, double edge_prob, std::uint64_t seed)
{
    if (n == 0)
        throw InputError("random graph needs n >= 1");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw InputError("edge probability must lie in [0, 1]");
    constexpr int kMaxAttempts = 1000;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Graph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (unit(rng) < edge_prob)
                    g.add_edge(i, j);
        if (g.is_connected())
            return g;
    }
    throw InputError("no connected graph after 1000 draws with edge probability " + std::to_string(edge_prob) +
                     "; use a higher edge probability");
}

PayoffMatrix consensus_apply(const WeightMatrix& w, const PayoffMatrix& x)
{
    if (static_cast<Eigen::Index>(w.size()) != x.rows())
        throw InputError("weight matrix is " + std::to_string(w.size()) + "x" + std::to_string(w.size()) +
                         " but payoff matrix has " + std::to_string(x.rows()) + " rows");
    return w.matrix() * x;
}

Topology topology_from_string(const std::string& s)
{
    if (s == "complete")
        return Topology::complete;
    if (s == "path")
        return Topology::path;
    if (s == "ring")
        return Topology::ring;
    if (s == "random")
        return Topology::random;
    throw InputError("unknown topology \"" + s + "\" (expected complete, path, ring or random)");
}

std::string to_string(Topology t)
{
    switch (t) {
    case Topology::complete: return "complete";
    case Topology::path: return "path";
    case Topology::ring: return "ring";
    case Topology::random: return "random";
    }
    return "unknown";
}

std::uint64_t step_seed(std::uint64_t master_seed, std::size_t k)
{
    // splitmix64 finalizer over the pair
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

Graph make_graph(std::size_t n, const NetworkSpec& spec, std::uint64_t seed)
{
    switch (spec.topology) {
    case Topology::complete: return Graph::complete(n);
    case Topology::path: return Graph::path(n);
    case Topology::ring: return Graph::ring(n);
    case Topology::random: return random_connected_graph(n, spec.edge_prob, seed);
    }
    throw InputError("unknown topology");
}

} // namespace

GraphSchedule::GraphSchedule(std::size_t n, NetworkSpec spec)
    : n_(n)
    , spec_(spec)
    , base_(make_graph(n, spec, spec.seed))
    , base_weights_(metropolis_weights(base_))
{
}

Graph GraphSchedule::graph_at(std::size_t k) const
{
    if (is_static())
        return base_;
    return random_connected_graph(n_, spec_.edge_prob, step_seed(spec_.seed, k));
}

WeightMatrix GraphSchedule::weights_at(std::size_t k) const
{
    if (is_static())
        return base_weights_;
    return metropolis_weights(graph_at(k));
}

nlohmann::json GraphSchedule::to_json(std::size_t steps) const
{
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t k = 0; k < steps; ++k) {
        nlohmann::json edges = nlohmann::json::array();
        const Graph g = graph_at(k);
        for (auto [i, j] : g.edges())
            edges.push_back({i, j});
        out.push_back({{"k", k}, {"edges", std::move(edges)}});
    }
    return out;
}

} // namespace coalitiond
