#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace coalitiond {

using AgentIndex = std::size_t;

/// One payoff share per agent, in coalitional-value units.
using PayoffVector = Eigen::VectorXd;

/// N stacked proposals; row i is the allocation proposed by agent i.
using PayoffMatrix = Eigen::MatrixXd;

/// Largest agent count for which a game can be stored as a dense 2^N table.
inline constexpr std::size_t kMaxDenseAgents = 20;

/// Largest agent count representable by a coalition bitmask.
inline constexpr std::size_t kMaxAgents = 63;

/// A subset of agents encoded as a bitmask (bit i set iff agent i is a member).
class Coalition
{
public:
    using Mask = std::uint64_t;

    constexpr Coalition() noexcept = default;
    constexpr explicit Coalition(Mask mask) noexcept : mask_(mask) {}

    static constexpr Coalition empty() noexcept { return Coalition{}; }
    static constexpr Coalition singleton(AgentIndex i) noexcept { return Coalition{Mask{1} << i}; }
    /// The grand coalition {0, ..., n-1}.
    static constexpr Coalition grand(std::size_t n) noexcept
    {
        return Coalition{n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1};
    }
    static Coalition of(std::initializer_list<AgentIndex> members) noexcept
    {
        Mask m = 0;
        for (auto i : members)
            m |= Mask{1} << i;
        return Coalition{m};
    }

    constexpr Mask mask() const noexcept { return mask_; }
    constexpr bool is_empty() const noexcept { return mask_ == 0; }
    constexpr bool contains(AgentIndex i) const noexcept { return (mask_ >> i) & 1U; }
    int size() const noexcept;

    constexpr Coalition with(AgentIndex i) const noexcept { return Coalition{mask_ | (Mask{1} << i)}; }
    constexpr Coalition without(AgentIndex i) const noexcept { return Coalition{mask_ & ~(Mask{1} << i)}; }
    constexpr bool is_subset_of(Coalition other) const noexcept { return (mask_ & ~other.mask_) == 0; }

    /// Highest member index + 1 (0 for the empty coalition).
    std::size_t span() const noexcept;

    std::vector<AgentIndex> members() const;
    std::string to_string() const;

    /// Sum of `x` over the members.
    double sum(const PayoffVector& x) const noexcept;

    friend constexpr bool operator==(Coalition, Coalition) noexcept = default;
    friend constexpr auto operator<=>(Coalition, Coalition) noexcept = default;

private:
    Mask mask_ = 0;
};

/// Pure value function form. Never called with the empty coalition.
using ValueFunction = std::function<double(Coalition)>;

/**
 * \brief A transferable-utility game (I, v) at a single time instant.
 *
 * Two representations are supported. A dense table holds one entry per
 * bitmask (ascending order, index == mask) and is limited to
 * `kMaxDenseAgents` agents; entries may be absent, which `validate_game`
 * reports and `value` rejects. The callable form evaluates v on demand.
 *
 * `value(empty)` is always 0 whatever the storage says. Instances are
 * immutable after construction.
 */
class InstantaneousGame
{
public:
    /// Dense table of length 2^n with every coalition defined.
    static InstantaneousGame from_table(std::size_t n_agents, std::vector<double> values);
    /// Dense table with explicit presence flags (used by deserialization).
    static InstantaneousGame from_partial_table(std::size_t n_agents, std::vector<double> values,
                                                std::vector<bool> defined);
    static InstantaneousGame from_function(std::size_t n_agents, ValueFunction fn);

    /// Evaluates `fn` on every non-empty coalition and stores the result.
    static InstantaneousGame tabulate(std::size_t n_agents, const ValueFunction& fn);

    std::size_t n_agents() const noexcept { return n_; }
    bool is_dense() const noexcept { return !fn_; }

    /// v(S). Throws InputError for members >= n, or for a missing dense entry.
    double value(Coalition s) const;
    double operator()(Coalition s) const { return value(s); }
    double grand_value() const { return value(Coalition::grand(n_)); }

    /// Dense copy of this game (identity for dense games).
    InstantaneousGame to_dense() const;

    /// Raw stored entry for `mask`, bypassing the empty-coalition convention.
    /// Only meaningful for dense games; returns nullopt-like NaN if absent.
    double stored(Coalition::Mask mask) const;
    bool defined(Coalition::Mask mask) const;

private:
    InstantaneousGame() = default;

    std::size_t n_ = 0;
    std::vector<double> table_;
    std::vector<bool> defined_;
    ValueFunction fn_;
};

/// Human-readable problems with a game; empty iff the game is well-formed.
std::vector<std::string> validate_game(const InstantaneousGame& game);

/// A sequence of instantaneous games over a common agent set.
class DynamicGame
{
public:
    DynamicGame() = default;
    explicit DynamicGame(std::vector<InstantaneousGame> games);

    std::size_t n_agents() const noexcept { return n_; }
    std::size_t horizon() const noexcept { return games_.size(); }
    const InstantaneousGame& at(std::size_t k) const { return games_.at(k); }
    const std::vector<InstantaneousGame>& games() const noexcept { return games_; }

    void push_back(InstantaneousGame g);

private:
    std::size_t n_ = 0;
    std::vector<InstantaneousGame> games_;
};

/// {"n_agents": N, "values": {"<mask>": v, ...}}; the empty mask is omitted.
nlohmann::json game_to_json(const InstantaneousGame& game);
InstantaneousGame game_from_json(const nlohmann::json& j);
InstantaneousGame load_game(const std::filesystem::path& path);

} // namespace coalitiond
