#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinkeq/game.hpp"
#include "sinkeq/machine.hpp"

namespace sinkeq {

/// 3-CNF. Literal +v / -v for variable v in 1..variables.
struct CnfFormula {
    std::uint32_t variables = 0;
    std::vector<std::array<std::int32_t, 3>> clauses;

    void validate() const;
    bool satisfied_by(const std::vector<bool>& assignment) const;  // assignment[v-1]
    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

enum class ReductionKind { Weighted, PlayerSpecific, Anonymous, Market, SatMarket };

std::string_view to_string(ReductionKind k);
ReductionKind parse_reduction_kind(std::string_view text);

inline constexpr Payoff kDefaultPenalty = 10'000;

/// A compiled gadget game with its canonical initial profile and the role of
/// every player. Strategy names are role-named and read from the game.
struct CompiledReduction {
    ReductionKind kind = ReductionKind::Weighted;
    GamePtr game;
    StrategyProfile initial;
    std::vector<std::string> roles;  // one per player, unique
    Payoff M = 0;
    Payoff N = 0;
    std::optional<TMSpec> machine;
    std::optional<CnfFormula> formula;

    std::optional<PlayerId> find_player(const std::string& role) const;
    PlayerId player(const std::string& role) const;
    StrategyId strategy(PlayerId player, const std::string& name) const;
};

CompiledReduction compile_tm_weighted(const TMSpec& spec, Payoff M = kDefaultPenalty);
CompiledReduction compile_tm_player_specific(const TMSpec& spec, Payoff M = kDefaultPenalty);
CompiledReduction compile_tm_market(const TMSpec& spec, Payoff M = kDefaultPenalty);
CompiledReduction compile_tm_anonymous(const TMSpec& spec);
CompiledReduction compile_sat_market(const CnfFormula& formula);

/// Number of W (equally V) control players: |Q| * |Gamma| * #{(i, i')}.
std::size_t control_count(const TMSpec& spec);

/// Round-start profile whose configuration players encode `config`.
StrategyProfile encode_config(const CompiledReduction& compiled, const TapeConfig& config);
/// Configuration read off the configuration players.
TapeConfig decode_config(const CompiledReduction& compiled, const StrategyProfile& profile);
/// Clock on Trigger, transition on Wait, every control on Zero (congestion and
/// market compiles); control1 on init and control2 on Xnew-state2 (anonymous).
bool is_round_start(const CompiledReduction& compiled, const StrategyProfile& profile);

struct RoundReport {
    bool matches = false;
    std::vector<std::string> trace;
    std::optional<std::size_t> divergent_step;
    std::string expected;
    std::string actual;
    StrategyProfile end_profile;
    std::optional<TapeConfig> start_config;
    std::optional<TapeConfig> end_config;
};

/// Drives the ten steps of one round and checks each against the expected
/// movers, including that no other player has an improving move.
RoundReport verify_round_weighted(const CompiledReduction& compiled, const StrategyProfile& start);

/// Same for the 19-row round of the anonymous compile.
RoundReport verify_round_anonymous(const CompiledReduction& compiled, const StrategyProfile& start);

/// Names of the control1 strategies in round order, then halt.
const std::vector<std::string>& anonymous_control1_strategies();

}  // namespace sinkeq
