#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinkeq/game.hpp"

namespace sinkeq {

/// Delay as a function of resource load. values[k] is the delay at load k+1;
/// loads above values.size() use `tail` when present and are undefined otherwise.
struct DelayTable {
    std::vector<Payoff> values;
    std::optional<Payoff> tail;

    static DelayTable constant(Payoff d) { return DelayTable{{}, d}; }
    /// "a/b/c" shorthand: a at load 1, b at load 2, c at every load >= 3.
    static DelayTable steps(std::vector<Payoff> levels);
    static DelayTable parse_shorthand(const std::string& text);

    bool covers(std::uint64_t load) const noexcept { return load <= values.size() || tail.has_value(); }
    Payoff at(std::uint64_t load) const;

    friend bool operator==(const DelayTable&, const DelayTable&) = default;
};

enum class DelayMode { Shared, PlayerSpecific };

struct CongestionResource {
    std::string name;
    DelayTable delay;  // shared mode
    /// Player-specific mode: one table per player that can use the resource.
    std::vector<std::optional<DelayTable>> player_delays;
};

struct CongestionStrategy {
    std::string name;
    std::vector<std::uint32_t> resources;  // sorted, unique
};

struct CongestionPlayer {
    std::string name;
    Payoff weight = 1;
    std::vector<CongestionStrategy> strategies;
};

/// Weighted / unweighted / player-specific congestion game over explicit
/// resource subsets. Utility is the negated cost.
class CongestionGame final : public Game {
public:
    CongestionGame(DelayMode mode, std::vector<CongestionResource> resources, std::vector<CongestionPlayer> players);

    GameClass game_class() const noexcept override { return GameClass::Congestion; }
    std::size_t num_players() const noexcept override { return players_.size(); }
    std::size_t num_strategies(PlayerId player) const override { return players_.at(player).strategies.size(); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override { return -player_cost(player, profile); }
    void deviation_utilities(PlayerId player, const StrategyProfile& profile, std::vector<Payoff>& out) const override;
    std::optional<Payoff> cost(PlayerId player, const StrategyProfile& profile) const override {
        return player_cost(player, profile);
    }
    std::string player_name(PlayerId player) const override { return players_.at(player).name; }
    std::string strategy_name(PlayerId player, StrategyId s) const override {
        return players_.at(player).strategies.at(s).name;
    }

    Payoff player_cost(PlayerId player, const StrategyProfile& profile) const;
    /// l_e(S): weighted load on every resource.
    std::vector<Payoff> loads(const StrategyProfile& profile) const;
    Payoff delay(std::uint32_t resource, PlayerId player, Payoff load) const;

    DelayMode mode() const noexcept { return mode_; }
    bool unweighted() const noexcept;
    const std::vector<CongestionResource>& resources() const noexcept { return resources_; }
    const std::vector<CongestionPlayer>& players() const noexcept { return players_; }
    std::optional<std::uint32_t> find_resource(const std::string& name) const;

private:
    DelayMode mode_;
    std::vector<CongestionResource> resources_;
    std::vector<CongestionPlayer> players_;
    std::unordered_map<std::string, std::uint32_t> resource_index_;
};

/// Incremental construction with resources interned by name.
class CongestionBuilder {
public:
    explicit CongestionBuilder(DelayMode mode) : mode_(mode) {}

    std::uint32_t resource(const std::string& name, const DelayTable& delay);
    std::uint32_t resource(const std::string& name);  // must already exist
    void set_player_delay(std::uint32_t resource, PlayerId player, const DelayTable& delay);
    PlayerId add_player(std::string name, Payoff weight = 1);
    StrategyId add_strategy(PlayerId player, std::string name, std::vector<std::uint32_t> resources);
    std::size_t player_count() const noexcept { return players_.size(); }

    CongestionGame build() &&;

private:
    DelayMode mode_;
    std::vector<CongestionResource> resources_;
    std::vector<CongestionPlayer> players_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace sinkeq
