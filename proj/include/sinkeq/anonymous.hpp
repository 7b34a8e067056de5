#pragma once

#include <span>
#include <string>
#include <vector>

#include "sinkeq/game.hpp"

namespace sinkeq {

/// Closed predicate language over the strategy-occupancy histogram.
/// Integer nodes: Const, Count, Add, Sub. Boolean nodes: comparisons, And.
/// Counts include every player, the evaluating one among them.
struct HistExpr {
    enum class Kind { Const, Count, Add, Sub, Eq, Ne, Lt, Gt, Le, Ge, And };

    Kind kind = Kind::Const;
    Payoff value = 0;  // Const: the constant; Count: the strategy index
    std::vector<HistExpr> args;

    bool is_boolean() const noexcept { return kind >= Kind::Eq; }
    Payoff eval_int(std::span<const std::uint32_t> histogram) const;
    bool eval_bool(std::span<const std::uint32_t> histogram) const;
    /// Throws ConfigError on ill-typed trees or counts outside [0, strategy_count).
    void validate(std::size_t strategy_count, bool want_boolean = true) const;

    friend bool operator==(const HistExpr&, const HistExpr&) = default;
};

std::string_view to_string(HistExpr::Kind k);
std::string to_string(const HistExpr& e, std::span<const std::string> strategy_names = {});

namespace hist {
HistExpr lit(Payoff v);
HistExpr count(StrategyId s);
HistExpr add(HistExpr a, HistExpr b);
HistExpr sub(HistExpr a, HistExpr b);
HistExpr eq(HistExpr a, HistExpr b);
HistExpr ne(HistExpr a, HistExpr b);
HistExpr lt(HistExpr a, HistExpr b);
HistExpr gt(HistExpr a, HistExpr b);
HistExpr le(HistExpr a, HistExpr b);
HistExpr ge(HistExpr a, HistExpr b);
HistExpr all(std::vector<HistExpr> terms);
}  // namespace hist

struct AnonymousRule {
    StrategyId strategy = 0;
    HistExpr when;

    friend bool operator==(const AnonymousRule&, const AnonymousRule&) = default;
};

struct AnonymousPlayer {
    std::string name;
    std::vector<StrategyId> allowed;  // sorted, unique
    std::vector<AnonymousRule> rules;
};

/// Anonymous game with utilities in {0,1,2}: 0 on disallowed strategies,
/// 2 when any rule for the chosen strategy holds on the histogram, 1 otherwise.
class AnonymousGame final : public Game {
public:
    AnonymousGame(std::vector<std::string> strategies, std::vector<AnonymousPlayer> players);

    GameClass game_class() const noexcept override { return GameClass::Anonymous; }
    std::size_t num_players() const noexcept override { return players_.size(); }
    std::size_t num_strategies(PlayerId) const override { return strategies_.size(); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override;
    void deviation_utilities(PlayerId player, const StrategyProfile& profile, std::vector<Payoff>& out) const override;
    std::string player_name(PlayerId player) const override { return players_.at(player).name; }
    std::string strategy_name(PlayerId, StrategyId s) const override { return strategies_.at(s); }

    std::vector<std::uint32_t> histogram(const StrategyProfile& profile) const;
    Payoff utility_at(PlayerId player, StrategyId strategy, std::span<const std::uint32_t> histogram) const;
    bool allowed(PlayerId player, StrategyId strategy) const { return allowed_[player][strategy]; }

    const std::vector<std::string>& strategies() const noexcept { return strategies_; }
    const std::vector<AnonymousPlayer>& players() const noexcept { return players_; }
    std::optional<StrategyId> find_strategy(const std::string& name) const;

private:
    std::vector<std::string> strategies_;
    std::vector<AnonymousPlayer> players_;
    std::vector<std::vector<bool>> allowed_;
    // rule_index_[player][strategy] -> indices into players_[player].rules (a disjunction)
    std::vector<std::vector<std::vector<std::uint32_t>>> rule_index_;
};

}  // namespace sinkeq
