#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinkeq/game.hpp"

namespace sinkeq {

/// Per-player choice of a subset of its ground set, as a bitmask over the
/// player's ground list.
using SetProfile = std::vector<std::uint64_t>;

struct ValidUtilityPlayer {
    std::string name;
    std::vector<std::uint32_t> ground;                // global element ids, sorted
    std::vector<std::vector<std::uint32_t>> feasible;  // subsets of ground, each sorted
};

struct SocialFunction {
    enum class Kind { Coverage, Table };
    Kind kind = Kind::Coverage;
    /// Coverage: weight of every global element; gamma = weight of the union.
    std::vector<Payoff> weights;
    /// Table: gamma for every concatenated mask (player 0 in the low bits).
    std::vector<Payoff> values;
};

struct UtilityFunction {
    enum class Kind { Marginal, Table };
    Kind kind = Kind::Marginal;
    /// Table: values[feasible profile index][player].
    std::vector<std::vector<Payoff>> values;
};

/// Valid-utility game: strategies of player i are its feasible sets F_i.
class ValidUtilityGame final : public Game {
public:
    ValidUtilityGame(std::size_t element_count, std::vector<ValidUtilityPlayer> players, SocialFunction social,
                     UtilityFunction utilities);

    GameClass game_class() const noexcept override { return GameClass::ValidUtility; }
    std::size_t num_players() const noexcept override { return players_.size(); }
    std::size_t num_strategies(PlayerId player) const override { return players_.at(player).feasible.size(); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override;
    std::string player_name(PlayerId player) const override { return players_.at(player).name; }
    std::string strategy_name(PlayerId player, StrategyId s) const override;

    Payoff social(const SetProfile& sets) const;
    SetProfile sets_of(const StrategyProfile& profile) const;
    /// Index of the empty action in F_i.
    StrategyId empty_action(PlayerId player) const { return empty_.at(player); }
    std::size_t total_ground_bits() const noexcept { return total_bits_; }

    std::size_t element_count() const noexcept { return element_count_; }
    const std::vector<ValidUtilityPlayer>& players() const noexcept { return players_; }
    const SocialFunction& social_function() const noexcept { return social_; }
    const UtilityFunction& utility_function() const noexcept { return utilities_; }

private:
    std::size_t element_count_;
    std::vector<ValidUtilityPlayer> players_;
    SocialFunction social_;
    UtilityFunction utilities_;
    std::vector<StrategyId> empty_;
    std::vector<std::vector<std::uint64_t>> feasible_masks_;
    std::vector<std::size_t> bit_offset_;
    std::size_t total_bits_ = 0;
    ProfileCodec codec_;
};

struct ValidUtilityReport {
    bool nondecreasing = true;
    bool submodular = true;
    bool marginal_utility = true;
    bool sum_bounded = true;
    /// First counterexample per failed flag, keyed by flag name.
    std::vector<std::pair<std::string, std::string>> counterexamples;
    std::uint64_t tuples_checked = 0;
    std::uint64_t profiles_checked = 0;

    bool all() const noexcept { return nondecreasing && submodular && marginal_utility && sum_bounded; }
};

/// Exhaustive check of the three valid-utility properties. Throws
/// CapExceeded when either the subset lattice or the profile space exceeds `cap`.
ValidUtilityReport check_valid_utility(const ValidUtilityGame& game, std::uint64_t cap);

}  // namespace sinkeq
