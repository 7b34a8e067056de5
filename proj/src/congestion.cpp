#include "sinkeq/congestion.hpp"

#include <algorithm>
#include <sstream>

#include "sinkeq/errors.hpp"

namespace sinkeq {

DelayTable DelayTable::steps(std::vector<Payoff> levels) {
    if (levels.empty()) throw ConfigError("delay shorthand needs at least one level");
    DelayTable t;
    t.tail = levels.back();
    levels.pop_back();
    t.values = std::move(levels);
    return t;
}

DelayTable DelayTable::parse_shorthand(const std::string& text) {
    std::vector<Payoff> levels;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '/')) {
        try {
            std::size_t used = 0;
            levels.push_back(std::stoll(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigError("bad delay shorthand '" + text + "'");
        }
    }
    return steps(std::move(levels));
}

Payoff DelayTable::at(std::uint64_t load) const {
    if (load == 0) return 0;
    if (load <= values.size()) return values[load - 1];
    if (tail) return *tail;
    throw ConfigError("delay table has no entry for load " + std::to_string(load));
}

CongestionGame::CongestionGame(DelayMode mode, std::vector<CongestionResource> resources,
                               std::vector<CongestionPlayer> players)
    : mode_(mode), resources_(std::move(resources)), players_(std::move(players)) {
    if (players_.empty()) throw ConfigError("congestion game needs at least one player");
    for (std::uint32_t e = 0; e < resources_.size(); ++e) {
        if (!resource_index_.emplace(resources_[e].name, e).second)
            throw ConfigError("duplicate resource name '" + resources_[e].name + "'");
    }

    // Highest reachable load per resource and which players can touch it.
    std::vector<Payoff> max_load(resources_.size(), 0);
    std::vector<std::vector<PlayerId>> users(resources_.size());
    for (PlayerId i = 0; i < players_.size(); ++i) {
        const auto& p = players_[i];
        if (p.weight <= 0) throw ConfigError("player '" + p.name + "' has non-positive weight");
        if (mode_ == DelayMode::PlayerSpecific && p.weight != 1)
            throw ConfigError("player-specific congestion games require unit weights (player '" + p.name + "')");
        if (p.strategies.empty()) throw ConfigError("player '" + p.name + "' has no strategies");
        std::vector<bool> touched(resources_.size(), false);
        for (const auto& s : p.strategies) {
            for (std::size_t k = 0; k < s.resources.size(); ++k) {
                const auto e = s.resources[k];
                if (e >= resources_.size())
                    throw ConfigError("strategy '" + s.name + "' of player '" + p.name +
                                      "' references undeclared resource " + std::to_string(e));
                if (k > 0 && s.resources[k - 1] >= e)
                    throw ConfigError("strategy '" + s.name + "' of player '" + p.name +
                                      "' resources are not sorted and unique");
                touched[e] = true;
            }
        }
        for (std::uint32_t e = 0; e < resources_.size(); ++e)
            if (touched[e]) {
                max_load[e] += p.weight;
                users[e].push_back(i);
            }
    }

    for (std::uint32_t e = 0; e < resources_.size(); ++e) {
        const auto& r = resources_[e];
        if (mode_ == DelayMode::Shared) {
            if (!r.delay.covers(static_cast<std::uint64_t>(max_load[e])))
                throw ConfigError("resource '" + r.name + "' has no delay for reachable load " +
                                  std::to_string(max_load[e]));
        } else {
            for (PlayerId i : users[e]) {
                if (i >= r.player_delays.size() || !r.player_delays[i])
                    throw ConfigError("resource '" + r.name + "' has no delay table for player '" +
                                      players_[i].name + "'");
                if (!r.player_delays[i]->covers(users[e].size()))
                    throw ConfigError("resource '" + r.name + "' has no delay for player '" + players_[i].name +
                                      "' at reachable load " + std::to_string(users[e].size()));
            }
        }
    }
}

bool CongestionGame::unweighted() const noexcept {
    return std::all_of(players_.begin(), players_.end(), [](const auto& p) { return p.weight == 1; });
}

std::optional<std::uint32_t> CongestionGame::find_resource(const std::string& name) const {
    auto it = resource_index_.find(name);
    if (it == resource_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Payoff> CongestionGame::loads(const StrategyProfile& profile) const {
    std::vector<Payoff> load(resources_.size(), 0);
    for (PlayerId i = 0; i < players_.size(); ++i)
        for (auto e : players_[i].strategies[profile[i]].resources) load[e] += players_[i].weight;
    return load;
}

Payoff CongestionGame::delay(std::uint32_t resource, PlayerId player, Payoff load) const {
    const auto& r = resources_[resource];
    if (mode_ == DelayMode::Shared) return r.delay.at(static_cast<std::uint64_t>(load));
    return r.player_delays[player]->at(static_cast<std::uint64_t>(load));
}

Payoff CongestionGame::player_cost(PlayerId player, const StrategyProfile& profile) const {
    const auto load = loads(profile);
    Payoff c = 0;
    for (auto e : players_[player].strategies[profile[player]].resources) c += delay(e, player, load[e]);
    return c;
}

void CongestionGame::deviation_utilities(PlayerId player, const StrategyProfile& profile,
                                         std::vector<Payoff>& out) const {
    auto load = loads(profile);
    const auto& p = players_[player];
    for (auto e : p.strategies[profile[player]].resources) load[e] -= p.weight;
    out.resize(p.strategies.size());
    for (StrategyId s = 0; s < p.strategies.size(); ++s) {
        Payoff c = 0;
        for (auto e : p.strategies[s].resources) c += delay(e, player, load[e] + p.weight);
        out[s] = -c;
    }
}

std::uint32_t CongestionBuilder::resource(const std::string& name, const DelayTable& delay) {
    auto [it, inserted] = index_.emplace(name, static_cast<std::uint32_t>(resources_.size()));
    if (inserted) {
        resources_.push_back(CongestionResource{name, delay, {}});
    } else if (resources_[it->second].delay != delay) {
        throw ConfigError("resource '" + name + "' interned with two different delay tables");
    }
    return it->second;
}

std::uint32_t CongestionBuilder::resource(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown resource '" + name + "'");
    return it->second;
}

void CongestionBuilder::set_player_delay(std::uint32_t resource, PlayerId player, const DelayTable& delay) {
    auto& pd = resources_.at(resource).player_delays;
    if (pd.size() <= player) pd.resize(player + 1);
    pd[player] = delay;
}

PlayerId CongestionBuilder::add_player(std::string name, Payoff weight) {
    players_.push_back(CongestionPlayer{std::move(name), weight, {}});
    return static_cast<PlayerId>(players_.size() - 1);
}

StrategyId CongestionBuilder::add_strategy(PlayerId player, std::string name, std::vector<std::uint32_t> resources) {
    std::sort(resources.begin(), resources.end());
    resources.erase(std::unique(resources.begin(), resources.end()), resources.end());
    auto& p = players_.at(player);
    p.strategies.push_back(CongestionStrategy{std::move(name), std::move(resources)});
    return static_cast<StrategyId>(p.strategies.size() - 1);
}

CongestionGame CongestionBuilder::build() && {
    if (mode_ == DelayMode::PlayerSpecific)
        for (auto& r : resources_) r.player_delays.resize(players_.size());
    return CongestionGame(mode_, std::move(resources_), std::move(players_));
}

}  // namespace sinkeq
