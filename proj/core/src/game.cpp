#include "coalitiond/game.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coalitiond/errors.hpp"

namespace coalitiond {

int Coalition::size() const noexcept
{
    return std::popcount(mask_);
}

std::size_t Coalition::span() const noexcept
{
    return static_cast<std::size_t>(std::bit_width(mask_));
}

std::vector<AgentIndex> Coalition::members() const
{
    std::vector<AgentIndex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Mask m = mask_; m != 0; m &= m - 1)
        out.push_back(static_cast<AgentIndex>(std::countr_zero(m)));
    return out;
}

std::string Coalition::to_string() const
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto i : members()) {
        if (!first)
            os << ',';
        os << i;
        first = false;
    }
    os << '}';
    return os.str();
}

double Coalition::sum(const PayoffVector& x) const noexcept
{
    double s = 0.0;
    for (Mask m = mask_; m != 0; m &= m - 1)
        s += x[std::countr_zero(m)];
    return s;
}

namespace {

void check_agent_count(std::size_t n, std::size_t cap)
{
    if (n == 0)
        throw InputError("game needs at least one agent");
    if (n > cap)
        throw CapabilityError("agent count " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
}

} // namespace

InstantaneousGame InstantaneousGame::from_table(std::size_t n_agents, std::vector<double> values)
{
    check_agent_count(n_agents, kMaxDenseAgents);
    std::vector<bool> defined(values.size(), true);
    return from_partial_table(n_agents, std::move(values), std::move(defined));
}

InstantaneousGame InstantaneousGame::from_partial_table(std::size_t n_agents, std::vector<double> values,
                                                        std::vector<bool> defined)
{
    check_agent_count(n_agents, kMaxDenseAgents);
    const std::size_t size = std::size_t{1} << n_agents;
    if (values.size() != size || defined.size() != size)
        throw InputError("dense table for " + std::to_string(n_agents) + " agents needs " + std::to_string(size) +
                         " entries, got " + std::to_string(values.size()));
    InstantaneousGame g;
    g.n_ = n_agents;
    g.table_ = std::move(values);
    g.defined_ = std::move(defined);
    return g;
}

InstantaneousGame InstantaneousGame::from_function(std::size_t n_agents, ValueFunction fn)
{
    check_agent_count(n_agents, kMaxAgents);
    if (!fn)
        throw InputError("empty value function");
    InstantaneousGame g;
    g.n_ = n_agents;
    g.fn_ = std::move(fn);
    return g;
}

InstantaneousGame InstantaneousGame::tabulate(std::size_t n_agents, const ValueFunction& fn)
{
    check_agent_count(n_agents, kMaxDenseAgents);
    const std::size_t size = std::size_t{1} << n_agents;
    std::vector<double> values(size, 0.0);
    for (std::size_t m = 1; m < size; ++m)
        values[m] = fn(Coalition{m});
    return from_table(n_agents, std::move(values));
}

double InstantaneousGame::value(Coalition s) const
{
    if (s.span() > n_)
        throw InputError("coalition " + s.to_string() + " has members outside 0.." + std::to_string(n_ - 1));
    if (s.is_empty())
        return 0.0;
    if (fn_)
        return fn_(s);
    if (!defined_[s.mask()])
        throw InputError("missing coalition " + s.to_string());
    return table_[s.mask()];
}

InstantaneousGame InstantaneousGame::to_dense() const
{
    if (!fn_)
        return *this;
    return tabulate(n_, fn_);
}

double InstantaneousGame::stored(Coalition::Mask mask) const
{
    if (fn_)
        return mask == 0 ? 0.0 : fn_(Coalition{mask});
    if (mask >= table_.size() || !defined_[mask])
        return std::numeric_limits<double>::quiet_NaN();
    return table_[mask];
}

bool InstantaneousGame::defined(Coalition::Mask mask) const
{
    if (fn_)
        return true;
    return mask < defined_.size() && defined_[mask];
}

std::vector<std::string> validate_game(const InstantaneousGame& game)
{
    std::vector<std::string> problems;
    if (game.is_dense()) {
        const std::size_t size = std::size_t{1} << game.n_agents();
        std::size_t missing = 0, non_finite = 0;
        for (std::size_t m = 1; m < size; ++m) {
            if (!game.defined(m))
                ++missing;
            else if (!std::isfinite(game.stored(m)))
                ++non_finite;
        }
        if (game.defined(0) && game.stored(0) != 0.0)
            problems.emplace_back("nonzero empty-coalition value");
        if (missing > 0)
            problems.emplace_back("missing coalition");
        if (non_finite > 0)
            problems.emplace_back("non-finite value");
    } else if (game.n_agents() <= kMaxDenseAgents) {
        // Callable games are checked exhaustively where that is affordable.
        if (game.stored(0) != 0.0)
            problems.emplace_back("nonzero empty-coalition value");
        const std::size_t size = std::size_t{1} << game.n_agents();
        for (std::size_t m = 1; m < size; ++m) {
            if (!std::isfinite(game.stored(m))) {
                problems.emplace_back("non-finite value");
                break;
            }
        }
    }
    return problems;
}

DynamicGame::DynamicGame(std::vector<InstantaneousGame> games)
{
    for (auto& g : games)
        push_back(std::move(g));
}

void DynamicGame::push_back(InstantaneousGame g)
{
    if (games_.empty())
        n_ = g.n_agents();
    else if (g.n_agents() != n_)
        throw InputError("dynamic game step " + std::to_string(games_.size()) + " has " +
                         std::to_string(g.n_agents()) + " agents, expected " + std::to_string(n_));
    games_.push_back(std::move(g));
}

nlohmann::json game_to_json(const InstantaneousGame& game)
{
    const auto dense = game.to_dense();
    nlohmann::json values = nlohmann::json::object();
    const std::size_t size = std::size_t{1} << dense.n_agents();
    for (std::size_t m = 1; m < size; ++m)
        if (dense.defined(m))
            values[std::to_string(m)] = dense.stored(m);
    return {{"n_agents", dense.n_agents()}, {"values", std::move(values)}};
}

InstantaneousGame game_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("n_agents") || !j.contains("values"))
        throw ParseError("game JSON needs \"n_agents\" and \"values\"");
    if (!j["n_agents"].is_number_integer() || j["n_agents"].get<long long>() <= 0)
        throw ParseError("\"n_agents\" must be a positive integer");
    const auto n = j["n_agents"].get<std::size_t>();
    if (n > kMaxDenseAgents)
        throw CapabilityError("serialized games are dense; at most " + std::to_string(kMaxDenseAgents) + " agents");
    const std::size_t size = std::size_t{1} << n;

    std::vector<double> values(size, 0.0);
    std::vector<bool> defined(size, false);
    defined[0] = true;
    for (const auto& [key, val] : j["values"].items()) {
        std::size_t pos = 0;
        unsigned long long mask = 0;
        try {
            mask = std::stoull(key, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != key.size() || key.empty())
            throw ParseError("coalition key \"" + key + "\" is not a decimal mask");
        if (mask >= size)
            throw ParseError("coalition mask " + key + " out of range for " + std::to_string(n) + " agents");
        if (!val.is_number())
            throw ParseError("value for coalition " + key + " is not a number");
        values[mask] = val.get<double>();
        defined[mask] = true;
    }
    return InstantaneousGame::from_partial_table(n, std::move(values), std::move(defined));
}

InstantaneousGame load_game(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open game file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return game_from_json(j);
}

} // namespace coalitiond
