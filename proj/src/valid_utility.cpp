#include "sinkeq/valid_utility.hpp"

#include <algorithm>

#include "sinkeq/errors.hpp"

namespace sinkeq {

namespace {

std::vector<std::uint32_t> counts_of(const std::vector<ValidUtilityPlayer>& players) {
    std::vector<std::uint32_t> c;
    for (const auto& p : players) c.push_back(static_cast<std::uint32_t>(p.feasible.size()));
    return c;
}

std::string describe_sets(const ValidUtilityGame& g, const SetProfile& sets) {
    std::string out = "(";
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (i) out += ",";
        out += "{";
        bool first = true;
        const auto& ground = g.players()[i].ground;
        for (std::size_t b = 0; b < ground.size(); ++b)
            if (sets[i] >> b & 1) {
                if (!first) out += ",";
                out += std::to_string(ground[b]);
                first = false;
            }
        out += "}";
    }
    return out + ")";
}

}  // namespace

ValidUtilityGame::ValidUtilityGame(std::size_t element_count, std::vector<ValidUtilityPlayer> players,
                                   SocialFunction social, UtilityFunction utilities)
    : element_count_(element_count),
      players_(std::move(players)),
      social_(std::move(social)),
      utilities_(std::move(utilities)),
      codec_(counts_of(players_)) {
    if (players_.empty()) throw ConfigError("valid-utility game needs at least one player");
    for (PlayerId i = 0; i < players_.size(); ++i) {
        auto& p = players_[i];
        for (std::size_t k = 0; k < p.ground.size(); ++k) {
            if (p.ground[k] >= element_count_) throw ConfigError("player '" + p.name + "' ground element out of range");
            if (k > 0 && p.ground[k - 1] >= p.ground[k])
                throw ConfigError("player '" + p.name + "' ground set is not sorted and unique");
        }
        bit_offset_.push_back(total_bits_);
        total_bits_ += p.ground.size();
        std::vector<std::uint64_t> masks;
        std::optional<StrategyId> empty;
        for (StrategyId s = 0; s < p.feasible.size(); ++s) {
            std::uint64_t mask = 0;
            for (auto v : p.feasible[s]) {
                auto it = std::lower_bound(p.ground.begin(), p.ground.end(), v);
                if (it == p.ground.end() || *it != v)
                    throw ConfigError("player '" + p.name + "' feasible set uses element outside its ground set");
                mask |= std::uint64_t{1} << (it - p.ground.begin());
            }
            if (std::find(masks.begin(), masks.end(), mask) != masks.end())
                throw ConfigError("player '" + p.name + "' lists a feasible set twice");
            masks.push_back(mask);
            if (mask == 0) empty = s;
        }
        if (!empty) throw ConfigError("player '" + p.name + "' has no empty action among its feasible sets");
        empty_.push_back(*empty);
        feasible_masks_.push_back(std::move(masks));
    }
    if (total_bits_ > 62) throw ConfigError("ground sets too large for exhaustive evaluation");

    if (social_.kind == SocialFunction::Kind::Coverage) {
        if (social_.weights.size() != element_count_) throw ConfigError("coverage weights must cover every element");
    } else if (social_.values.size() != (std::uint64_t{1} << total_bits_)) {
        throw ConfigError("social table must have 2^(sum of ground sizes) entries");
    }
    if (utilities_.kind == UtilityFunction::Kind::Table) {
        const auto size = codec_.space_size();
        if (!size || utilities_.values.size() != *size)
            throw ConfigError("utility table must have one row per feasible profile");
        for (const auto& row : utilities_.values)
            if (row.size() != players_.size()) throw ConfigError("utility table row has wrong player count");
    }
}

std::string ValidUtilityGame::strategy_name(PlayerId player, StrategyId s) const {
    const auto& set = players_.at(player).feasible.at(s);
    std::string out = "{";
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(set[k]);
    }
    return out + "}";
}

SetProfile ValidUtilityGame::sets_of(const StrategyProfile& profile) const {
    SetProfile sets(players_.size());
    for (PlayerId i = 0; i < players_.size(); ++i) sets[i] = feasible_masks_[i][profile[i]];
    return sets;
}

Payoff ValidUtilityGame::social(const SetProfile& sets) const {
    if (social_.kind == SocialFunction::Kind::Table) {
        std::uint64_t index = 0;
        for (PlayerId i = 0; i < players_.size(); ++i) index |= sets[i] << bit_offset_[i];
        return social_.values[index];
    }
    std::vector<bool> covered(element_count_, false);
    Payoff total = 0;
    for (PlayerId i = 0; i < players_.size(); ++i) {
        const auto& ground = players_[i].ground;
        for (std::size_t b = 0; b < ground.size(); ++b)
            if ((sets[i] >> b & 1) && !covered[ground[b]]) {
                covered[ground[b]] = true;
                total += social_.weights[ground[b]];
            }
    }
    return total;
}

Payoff ValidUtilityGame::utility(PlayerId player, const StrategyProfile& profile) const {
    if (utilities_.kind == UtilityFunction::Kind::Table) return utilities_.values[codec_.encode(profile)][player];
    auto sets = sets_of(profile);
    const Payoff with = social(sets);
    sets[player] = 0;
    return with - social(sets);
}

ValidUtilityReport check_valid_utility(const ValidUtilityGame& game, std::uint64_t cap) {
    ValidUtilityReport report;
    const auto bits = game.total_ground_bits();
    const std::uint64_t lattice = std::uint64_t{1} << bits;
    if (lattice > cap) throw CapExceeded(cap, "instance too large: subset lattice has " + std::to_string(lattice) + " tuples");
    const auto space = ProfileCodec(game.strategy_counts()).space_size();
    if (!space || *space > cap) throw CapExceeded(cap, "instance too large: feasible profile space exceeds cap");

    const auto n = game.num_players();
    std::vector<std::size_t> offset(n), width(n);
    for (std::size_t i = 0, off = 0; i < n; ++i) {
        offset[i] = off;
        width[i] = game.players()[i].ground.size();
        off += width[i];
    }
    auto split = [&](std::uint64_t flat) {
        SetProfile sets(n);
        for (std::size_t i = 0; i < n; ++i) sets[i] = (flat >> offset[i]) & ((std::uint64_t{1} << width[i]) - 1);
        return sets;
    };

    auto fail = [&](bool& flag, const char* name, std::string detail) {
        if (flag) report.counterexamples.emplace_back(name, std::move(detail));
        flag = false;
    };

    // Monotonicity and submodularity via single-element steps on the product lattice.
    for (std::uint64_t a = 0; a < lattice; ++a) {
        ++report.tuples_checked;
        const Payoff ga = game.social(split(a));
        for (std::size_t v = 0; v < bits; ++v) {
            if (a >> v & 1) continue;
            const auto av = a | (std::uint64_t{1} << v);
            const Payoff gav = game.social(split(av));
            if (gav < ga)
                fail(report.nondecreasing, "nondecreasing",
                     "gamma" + describe_sets(game, split(a)) + "=" + std::to_string(ga) + " > gamma" +
                         describe_sets(game, split(av)) + "=" + std::to_string(gav));
            for (std::size_t w = v + 1; w < bits; ++w) {
                if (a >> w & 1) continue;
                const auto aw = a | (std::uint64_t{1} << w);
                const Payoff gaw = game.social(split(aw));
                const Payoff gavw = game.social(split(av | aw));
                if (gav + gaw < gavw + ga)
                    fail(report.submodular, "submodular",
                         "at " + describe_sets(game, split(a)) + " adding bits " + std::to_string(v) + "," +
                             std::to_string(w) + ": gamma(A+v)+gamma(A+w)=" + std::to_string(gav + gaw) +
                             " < gamma(A+v+w)+gamma(A)=" + std::to_string(gavw + ga));
            }
        }
    }

    ProfileCodec codec(game.strategy_counts());
    StrategyProfile profile;
    for (std::uint64_t idx = 0; idx < *space; ++idx) {
        ++report.profiles_checked;
        codec.decode_into(idx, profile);
        auto sets = game.sets_of(profile);
        const Payoff gamma = game.social(sets);
        Payoff sum = 0;
        for (PlayerId i = 0; i < n; ++i) {
            const Payoff u = game.utility(i, profile);
            sum += u;
            auto without = sets;
            without[i] = 0;
            const Payoff marginal = gamma - game.social(without);
            if (u < marginal)
                fail(report.marginal_utility, "marginal_utility",
                     "profile " + to_string(profile) + " player " + std::to_string(i) + ": u=" + std::to_string(u) +
                         " < marginal " + std::to_string(marginal));
        }
        if (sum > gamma)
            fail(report.sum_bounded, "sum_bounded",
                 "profile " + to_string(profile) + ": sum of utilities " + std::to_string(sum) + " > gamma " +
                     std::to_string(gamma));
    }
    return report;
}

}  // namespace sinkeq
