#include "sinkeq/market.hpp"

#include <algorithm>
#include <set>

#include "sinkeq/errors.hpp"

namespace sinkeq {

MarketGame::MarketGame(std::vector<PassiveAgent> passive, std::vector<MarketPlayer> players)
    : passive_(std::move(passive)), players_(std::move(players)) {
    if (players_.empty()) throw ConfigError("market game needs at least one active agent");
    rank_.assign(passive_.size(), std::vector<std::uint32_t>(players_.size(), kUnranked));
    for (std::uint32_t y = 0; y < passive_.size(); ++y) {
        const auto& agent = passive_[y];
        if (!index_.emplace(agent.name, y).second) throw ConfigError("duplicate passive agent '" + agent.name + "'");
        if (agent.value <= 0) throw ConfigError("passive agent '" + agent.name + "' needs a positive value");
        for (std::uint32_t r = 0; r < agent.preference.size(); ++r) {
            const auto x = agent.preference[r];
            if (x >= players_.size())
                throw ConfigError("passive agent '" + agent.name + "' ranks unknown player " + std::to_string(x));
            if (rank_[y][x] != kUnranked)
                throw ConfigError("passive agent '" + agent.name + "' ranks player " + std::to_string(x) + " twice");
            rank_[y][x] = r;
        }
    }
    for (const auto& p : players_) {
        if (p.strategies.empty()) throw ConfigError("active agent '" + p.name + "' has no strategies");
        for (const auto& s : p.strategies)
            for (std::size_t k = 0; k < s.demand.size(); ++k) {
                if (s.demand[k] >= passive_.size())
                    throw ConfigError("strategy '" + s.name + "' of '" + p.name + "' demands an undeclared agent");
                if (k > 0 && s.demand[k - 1] >= s.demand[k])
                    throw ConfigError("strategy '" + s.name + "' of '" + p.name + "' demand is not sorted and unique");
            }
    }
    // Preferences must be total over everyone who can demand the agent.
    for (PlayerId x = 0; x < players_.size(); ++x)
        for (const auto& s : players_[x].strategies)
            for (auto y : s.demand)
                if (rank_[y][x] == kUnranked)
                    throw ConfigError("passive agent '" + passive_[y].name + "' has no preference for '" +
                                      players_[x].name + "'");
}

std::optional<std::uint32_t> MarketGame::find_passive(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::uint32_t> MarketGame::best_ranks(const StrategyProfile& profile, std::optional<PlayerId> skip) const {
    std::vector<std::uint32_t> best(passive_.size(), kUnranked);
    for (PlayerId x = 0; x < players_.size(); ++x) {
        if (skip && *skip == x) continue;
        for (auto y : players_[x].strategies[profile[x]].demand) best[y] = std::min(best[y], rank_[y][x]);
    }
    return best;
}

std::vector<std::optional<PlayerId>> MarketGame::compute_winners(const StrategyProfile& profile) const {
    const auto best = best_ranks(profile, std::nullopt);
    std::vector<std::optional<PlayerId>> winner(passive_.size());
    for (std::uint32_t y = 0; y < passive_.size(); ++y)
        if (best[y] != kUnranked) winner[y] = passive_[y].preference[best[y]];
    return winner;
}

Payoff MarketGame::utility(PlayerId player, const StrategyProfile& profile) const {
    const auto best = best_ranks(profile, std::nullopt);
    Payoff u = 0;
    for (auto y : players_[player].strategies[profile[player]].demand)
        if (best[y] == rank_[y][player]) u += passive_[y].value;
    return u;
}

void MarketGame::deviation_utilities(PlayerId player, const StrategyProfile& profile, std::vector<Payoff>& out) const {
    const auto others = best_ranks(profile, player);
    const auto& p = players_[player];
    out.resize(p.strategies.size());
    for (StrategyId s = 0; s < p.strategies.size(); ++s) {
        Payoff u = 0;
        for (auto y : p.strategies[s].demand)
            if (rank_[y][player] < others[y]) u += passive_[y].value;
        out[s] = u;
    }
}

std::vector<std::string> MarketGame::lower_ideal_violations() const {
    std::vector<std::string> out;
    for (const auto& p : players_) {
        std::set<std::vector<std::uint32_t>> family;
        for (const auto& s : p.strategies) family.insert(s.demand);
        bool found = false;
        for (const auto& s : p.strategies) {
            for (std::size_t k = 0; k < s.demand.size() && !found; ++k) {
                auto smaller = s.demand;
                smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
                if (!family.count(smaller)) {
                    out.push_back(p.name + ": '" + s.name + "' minus '" + passive_[s.demand[k]].name + "'");
                    found = true;
                }
            }
            if (found) break;
        }
    }
    return out;
}

std::uint32_t MarketBuilder::passive(const std::string& name, Payoff value, std::vector<PlayerId> preference) {
    auto [it, inserted] = index_.emplace(name, static_cast<std::uint32_t>(passive_.size()));
    if (!inserted) {
        const auto& existing = passive_[it->second];
        if (existing.value != value || existing.preference != preference)
            throw ConfigError("passive agent '" + name + "' interned with conflicting definitions");
        return it->second;
    }
    passive_.push_back(PassiveAgent{name, value, std::move(preference)});
    return it->second;
}

std::uint32_t MarketBuilder::passive(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown passive agent '" + name + "'");
    return it->second;
}

PlayerId MarketBuilder::add_player(std::string name) {
    players_.push_back(MarketPlayer{std::move(name), {}});
    return static_cast<PlayerId>(players_.size() - 1);
}

StrategyId MarketBuilder::add_strategy(PlayerId player, std::string name, std::vector<std::uint32_t> demand) {
    std::sort(demand.begin(), demand.end());
    demand.erase(std::unique(demand.begin(), demand.end()), demand.end());
    auto& p = players_.at(player);
    p.strategies.push_back(MarketStrategy{std::move(name), std::move(demand)});
    return static_cast<StrategyId>(p.strategies.size() - 1);
}

MarketGame MarketBuilder::build() && { return MarketGame(std::move(passive_), std::move(players_)); }

}  // namespace sinkeq
