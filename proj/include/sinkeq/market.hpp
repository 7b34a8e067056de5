#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinkeq/game.hpp"

namespace sinkeq {

struct PassiveAgent {
    std::string name;
    Payoff value = 0;
    std::vector<PlayerId> preference;  // most preferred first; strict
};

struct MarketStrategy {
    std::string name;
    std::vector<std::uint32_t> demand;  // sorted passive-agent indices
};

struct MarketPlayer {
    std::string name;
    std::vector<MarketStrategy> strategies;
};

/// Many-to-one two-sided market with uniform (additive) utilities: each
/// passive agent goes to its most preferred demander, and an active agent
/// earns the summed values of the passive agents it wins.
class MarketGame final : public Game {
public:
    MarketGame(std::vector<PassiveAgent> passive, std::vector<MarketPlayer> players);

    GameClass game_class() const noexcept override { return GameClass::Market; }
    std::size_t num_players() const noexcept override { return players_.size(); }
    std::size_t num_strategies(PlayerId player) const override { return players_.at(player).strategies.size(); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override;
    void deviation_utilities(PlayerId player, const StrategyProfile& profile, std::vector<Payoff>& out) const override;
    std::string player_name(PlayerId player) const override { return players_.at(player).name; }
    std::string strategy_name(PlayerId player, StrategyId s) const override {
        return players_.at(player).strategies.at(s).name;
    }

    /// winner[y] for every passive agent; nullopt when nobody demands y.
    std::vector<std::optional<PlayerId>> compute_winners(const StrategyProfile& profile) const;
    /// First missing one-element-smaller subset per player, as "player: strategy minus passive".
    std::vector<std::string> lower_ideal_violations() const;

    const std::vector<PassiveAgent>& passive() const noexcept { return passive_; }
    const std::vector<MarketPlayer>& players() const noexcept { return players_; }
    std::optional<std::uint32_t> find_passive(const std::string& name) const;

private:
    static constexpr std::uint32_t kUnranked = 0xffffffffu;
    // Lowest rank among demanders of each passive agent, skipping `skip`.
    std::vector<std::uint32_t> best_ranks(const StrategyProfile& profile, std::optional<PlayerId> skip) const;

    std::vector<PassiveAgent> passive_;
    std::vector<MarketPlayer> players_;
    std::vector<std::vector<std::uint32_t>> rank_;  // rank_[y][x], kUnranked if absent
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Incremental construction with passive agents interned by name.
class MarketBuilder {
public:
    std::uint32_t passive(const std::string& name, Payoff value, std::vector<PlayerId> preference);
    std::uint32_t passive(const std::string& name) const;
    PlayerId add_player(std::string name);
    StrategyId add_strategy(PlayerId player, std::string name, std::vector<std::uint32_t> demand);
    MarketGame build() &&;

private:
    std::vector<PassiveAgent> passive_;
    std::vector<MarketPlayer> players_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace sinkeq
