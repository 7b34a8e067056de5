#include "sinkeq/game.hpp"

#include <limits>

#include "sinkeq/errors.hpp"

namespace sinkeq {

std::string to_string(const StrategyProfile& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.choices.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(p.choices[i]);
    }
    return out + ")";
}

ProfileCodec::ProfileCodec(std::vector<std::uint32_t> radices) : radices_(std::move(radices)) {
    std::uint64_t size = 1;
    bool fits = true;
    for (std::uint32_t r : radices_) {
        if (r == 0) throw ConfigError("player with an empty strategy set");
        if (size > std::numeric_limits<std::uint64_t>::max() / r) {
            fits = false;
            break;
        }
        size *= r;
    }
    if (fits) size_ = size;
}

std::uint64_t ProfileCodec::encode(const StrategyProfile& p) const {
    if (!size_) throw CapExceeded(std::numeric_limits<std::uint64_t>::max(), "profile space exceeds 64-bit index");
    std::uint64_t index = 0;
    for (std::size_t i = radices_.size(); i-- > 0;) index = index * radices_[i] + p.choices[i];
    return index;
}

void ProfileCodec::decode_into(std::uint64_t index, StrategyProfile& out) const {
    out.choices.resize(radices_.size());
    for (std::size_t i = 0; i < radices_.size(); ++i) {
        out.choices[i] = static_cast<StrategyId>(index % radices_[i]);
        index /= radices_[i];
    }
}

StrategyProfile ProfileCodec::decode(std::uint64_t index) const {
    StrategyProfile p;
    decode_into(index, p);
    return p;
}

std::string_view to_string(GameClass c) {
    switch (c) {
        case GameClass::Table: return "table";
        case GameClass::Congestion: return "congestion";
        case GameClass::Anonymous: return "anonymous";
        case GameClass::Market: return "market";
        case GameClass::ValidUtility: return "valid_utility";
    }
    return "unknown";
}

void Game::deviation_utilities(PlayerId player, const StrategyProfile& profile,
                               std::vector<Payoff>& out) const {
    const std::size_t n = num_strategies(player);
    out.resize(n);
    StrategyProfile probe = profile;
    for (StrategyId s = 0; s < n; ++s) {
        probe.choices[player] = s;
        out[s] = utility(player, probe);
    }
}

std::optional<Payoff> Game::cost(PlayerId, const StrategyProfile&) const { return std::nullopt; }

std::string Game::player_name(PlayerId player) const { return "p" + std::to_string(player); }

std::string Game::strategy_name(PlayerId, StrategyId strategy) const { return std::to_string(strategy); }

std::vector<std::uint32_t> Game::strategy_counts() const {
    std::vector<std::uint32_t> counts(num_players());
    for (PlayerId i = 0; i < counts.size(); ++i) counts[i] = static_cast<std::uint32_t>(num_strategies(i));
    return counts;
}

void Game::check_profile(const StrategyProfile& profile) const {
    if (profile.size() != num_players())
        throw PreconditionError("profile has " + std::to_string(profile.size()) + " entries, game has " +
                                std::to_string(num_players()) + " players");
    for (PlayerId i = 0; i < profile.size(); ++i)
        if (profile[i] >= num_strategies(i))
            throw PreconditionError("strategy " + std::to_string(profile[i]) + " out of range for player " +
                                    std::to_string(i));
}

TableGame::TableGame(std::vector<std::uint32_t> strategy_counts, std::vector<std::vector<Payoff>> payoffs,
                     std::vector<std::string> player_names,
                     std::vector<std::vector<std::string>> strategy_names)
    : counts_(std::move(strategy_counts)),
      codec_(counts_),
      payoffs_(std::move(payoffs)),
      player_names_(std::move(player_names)),
      strategy_names_(std::move(strategy_names)) {
    if (counts_.empty()) throw ConfigError("table game needs at least one player");
    const auto size = codec_.space_size();
    if (!size || payoffs_.size() != *size)
        throw ConfigError("payoff table has " + std::to_string(payoffs_.size()) + " rows, expected " +
                          (size ? std::to_string(*size) : std::string("overflow")));
    for (std::size_t r = 0; r < payoffs_.size(); ++r)
        if (payoffs_[r].size() != counts_.size())
            throw ConfigError("payoff row " + std::to_string(r) + " has wrong player count");
    if (!player_names_.empty() && player_names_.size() != counts_.size())
        throw ConfigError("player name count mismatch");
    if (!strategy_names_.empty()) {
        if (strategy_names_.size() != counts_.size()) throw ConfigError("strategy name list count mismatch");
        for (std::size_t i = 0; i < counts_.size(); ++i)
            if (strategy_names_[i].size() != counts_[i])
                throw ConfigError("strategy name count mismatch for player " + std::to_string(i));
    }
}

Payoff TableGame::utility(PlayerId player, const StrategyProfile& profile) const {
    return payoffs_[codec_.encode(profile)][player];
}

std::string TableGame::player_name(PlayerId player) const {
    return player_names_.empty() ? Game::player_name(player) : player_names_.at(player);
}

std::string TableGame::strategy_name(PlayerId player, StrategyId strategy) const {
    return strategy_names_.empty() ? Game::strategy_name(player, strategy) : strategy_names_.at(player).at(strategy);
}

}  // namespace sinkeq
