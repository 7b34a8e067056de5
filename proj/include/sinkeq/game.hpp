#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinkeq/profile.hpp"

namespace sinkeq {

enum class GameClass { Table, Congestion, Anonymous, Market, ValidUtility };

std::string_view to_string(GameClass c);

/// Common evaluation interface over the succinct game classes.
///
/// Instances are immutable after construction; every query is a pure
/// function of its arguments and may be called concurrently.
class Game {
public:
    virtual ~Game() = default;

    virtual GameClass game_class() const noexcept = 0;
    virtual std::size_t num_players() const noexcept = 0;
    virtual std::size_t num_strategies(PlayerId player) const = 0;

    virtual Payoff utility(PlayerId player, const StrategyProfile& profile) const = 0;

    /// out[s] = utility of `player` after switching to strategy s, all
    /// other choices held fixed. out[profile[player]] is the current utility.
    virtual void deviation_utilities(PlayerId player, const StrategyProfile& profile,
                                     std::vector<Payoff>& out) const;

    /// Cost c_i(S) for cost-minimising classes; nullopt for utility-only classes.
    virtual std::optional<Payoff> cost(PlayerId player, const StrategyProfile& profile) const;

    virtual std::string player_name(PlayerId player) const;
    virtual std::string strategy_name(PlayerId player, StrategyId strategy) const;

    std::vector<std::uint32_t> strategy_counts() const;
    /// Throws PreconditionError unless the profile has one in-range index per player.
    void check_profile(const StrategyProfile& profile) const;
};

using GamePtr = std::shared_ptr<const Game>;

/// Explicit payoff table over all profiles. Mostly a test baseline.
class TableGame final : public Game {
public:
    /// payoffs[profile index][player], profile index per ProfileCodec.
    TableGame(std::vector<std::uint32_t> strategy_counts, std::vector<std::vector<Payoff>> payoffs,
              std::vector<std::string> player_names = {},
              std::vector<std::vector<std::string>> strategy_names = {});

    GameClass game_class() const noexcept override { return GameClass::Table; }
    std::size_t num_players() const noexcept override { return counts_.size(); }
    std::size_t num_strategies(PlayerId player) const override { return counts_.at(player); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override;
    std::string player_name(PlayerId player) const override;
    std::string strategy_name(PlayerId player, StrategyId strategy) const override;

    const std::vector<std::vector<Payoff>>& payoffs() const noexcept { return payoffs_; }
    const ProfileCodec& codec() const noexcept { return codec_; }
    bool has_names() const noexcept { return !player_names_.empty(); }

private:
    std::vector<std::uint32_t> counts_;
    ProfileCodec codec_;
    std::vector<std::vector<Payoff>> payoffs_;
    std::vector<std::string> player_names_;
    std::vector<std::vector<std::string>> strategy_names_;
};

}  // namespace sinkeq
