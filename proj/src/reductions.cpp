#include <cstdlib>

#include "reductions_internal.hpp"

namespace sinkeq {

void CnfFormula::validate() const {
    if (variables == 0) throw ConfigError("formula needs at least one variable");
    for (std::size_t j = 0; j < clauses.size(); ++j)
        for (auto lit : clauses[j])
            if (lit == 0 || static_cast<std::uint32_t>(std::abs(lit)) > variables)
                throw ConfigError("clause " + std::to_string(j + 1) + " has literal " + std::to_string(lit) +
                                  " outside 1.." + std::to_string(variables));
}

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
    if (assignment.size() != variables) throw PreconditionError("assignment size differs from the variable count");
    for (const auto& clause : clauses) {
        bool sat = false;
        for (auto lit : clause) sat = sat || assignment[std::abs(lit) - 1] == (lit > 0);
        if (!sat) return false;
    }
    return true;
}

std::string_view to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::Weighted: return "tm2wcg";
        case ReductionKind::PlayerSpecific: return "tm2psg";
        case ReductionKind::Anonymous: return "tm2anon";
        case ReductionKind::Market: return "tm2market";
        case ReductionKind::SatMarket: return "sat2market";
    }
    return "?";
}

ReductionKind parse_reduction_kind(std::string_view text) {
    for (auto k : {ReductionKind::Weighted, ReductionKind::PlayerSpecific, ReductionKind::Anonymous, ReductionKind::Market,
                   ReductionKind::SatMarket})
        if (to_string(k) == text) return k;
    throw ConfigError("unknown reduction '" + std::string(text) + "'");
}

std::optional<PlayerId> CompiledReduction::find_player(const std::string& role) const {
    for (PlayerId i = 0; i < roles.size(); ++i)
        if (roles[i] == role) return i;
    return std::nullopt;
}

PlayerId CompiledReduction::player(const std::string& role) const {
    if (auto p = find_player(role)) return *p;
    throw PreconditionError("no player with role '" + role + "'");
}

StrategyId CompiledReduction::strategy(PlayerId p, const std::string& name) const {
    for (StrategyId s = 0; s < game->num_strategies(p); ++s)
        if (game->strategy_name(p, s) == name) return s;
    throw PreconditionError("player '" + roles.at(p) + "' has no strategy '" + name + "'");
}

namespace {
void need_machine(const CompiledReduction& c) {
    if (!c.machine) throw UnsupportedOperation("compiled reduction does not simulate a machine");
}
}  // namespace

StrategyProfile encode_config(const CompiledReduction& c, const TapeConfig& config) {
    need_machine(c);
    return c.kind == ReductionKind::Anonymous ? detail::encode_anon(c, config) : detail::encode_tm(c, config);
}

TapeConfig decode_config(const CompiledReduction& c, const StrategyProfile& profile) {
    need_machine(c);
    c.game->check_profile(profile);
    return c.kind == ReductionKind::Anonymous ? detail::decode_anon(c, profile) : detail::decode_tm(c, profile);
}

bool is_round_start(const CompiledReduction& c, const StrategyProfile& profile) {
    need_machine(c);
    c.game->check_profile(profile);
    return c.kind == ReductionKind::Anonymous ? detail::round_start_anon(c, profile) : detail::round_start_tm(c, profile);
}

}  // namespace sinkeq
