#include "sinkeq/anonymous.hpp"

#include <algorithm>

#include "sinkeq/errors.hpp"

namespace sinkeq {

std::string_view to_string(HistExpr::Kind k) {
    using K = HistExpr::Kind;
    switch (k) {
        case K::Const: return "const";
        case K::Count: return "count";
        case K::Add: return "add";
        case K::Sub: return "sub";
        case K::Eq: return "==";
        case K::Ne: return "!=";
        case K::Lt: return "<";
        case K::Gt: return ">";
        case K::Le: return "<=";
        case K::Ge: return ">=";
        case K::And: return "and";
    }
    return "?";
}

Payoff HistExpr::eval_int(std::span<const std::uint32_t> h) const {
    switch (kind) {
        case Kind::Const: return value;
        case Kind::Count: return h[static_cast<std::size_t>(value)];
        case Kind::Add: return args[0].eval_int(h) + args[1].eval_int(h);
        case Kind::Sub: return args[0].eval_int(h) - args[1].eval_int(h);
        default: throw ConfigError("boolean predicate used as integer");
    }
}

bool HistExpr::eval_bool(std::span<const std::uint32_t> h) const {
    switch (kind) {
        case Kind::Eq: return args[0].eval_int(h) == args[1].eval_int(h);
        case Kind::Ne: return args[0].eval_int(h) != args[1].eval_int(h);
        case Kind::Lt: return args[0].eval_int(h) < args[1].eval_int(h);
        case Kind::Gt: return args[0].eval_int(h) > args[1].eval_int(h);
        case Kind::Le: return args[0].eval_int(h) <= args[1].eval_int(h);
        case Kind::Ge: return args[0].eval_int(h) >= args[1].eval_int(h);
        case Kind::And:
            return std::all_of(args.begin(), args.end(), [&](const HistExpr& a) { return a.eval_bool(h); });
        default: throw ConfigError("integer expression used as predicate");
    }
}

void HistExpr::validate(std::size_t strategy_count, bool want_boolean) const {
    if (is_boolean() != want_boolean)
        throw ConfigError(std::string("expected ") + (want_boolean ? "predicate" : "integer expression") +
                          ", found '" + std::string(to_string(kind)) + "'");
    switch (kind) {
        case Kind::Const:
            if (!args.empty()) throw ConfigError("const node with children");
            return;
        case Kind::Count:
            if (!args.empty()) throw ConfigError("count node with children");
            if (value < 0 || static_cast<std::size_t>(value) >= strategy_count)
                throw ConfigError("predicate references undeclared strategy " + std::to_string(value));
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Eq:
        case Kind::Ne:
        case Kind::Lt:
        case Kind::Gt:
        case Kind::Le:
        case Kind::Ge:
            if (args.size() != 2)
                throw ConfigError("'" + std::string(to_string(kind)) + "' needs exactly two operands");
            for (const auto& a : args) a.validate(strategy_count, false);
            return;
        case Kind::And:
            if (args.empty()) throw ConfigError("empty conjunction");
            for (const auto& a : args) a.validate(strategy_count, true);
            return;
    }
}

std::string to_string(const HistExpr& e, std::span<const std::string> names) {
    using K = HistExpr::Kind;
    switch (e.kind) {
        case K::Const: return std::to_string(e.value);
        case K::Count: {
            const auto idx = static_cast<std::size_t>(e.value);
            return "|" + (idx < names.size() ? names[idx] : "#" + std::to_string(idx)) + "|";
        }
        case K::Add: return "(" + to_string(e.args[0], names) + " + " + to_string(e.args[1], names) + ")";
        case K::Sub: return "(" + to_string(e.args[0], names) + " - " + to_string(e.args[1], names) + ")";
        case K::And: {
            std::string out;
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += " and ";
                out += to_string(e.args[i], names);
            }
            return out;
        }
        default:
            return to_string(e.args[0], names) + " " + std::string(to_string(e.kind)) + " " +
                   to_string(e.args[1], names);
    }
}

namespace hist {
namespace {
HistExpr node(HistExpr::Kind k, HistExpr a, HistExpr b) {
    HistExpr e;
    e.kind = k;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
}
}  // namespace

HistExpr lit(Payoff v) { return HistExpr{HistExpr::Kind::Const, v, {}}; }
HistExpr count(StrategyId s) { return HistExpr{HistExpr::Kind::Count, static_cast<Payoff>(s), {}}; }
HistExpr add(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Add, std::move(a), std::move(b)); }
HistExpr sub(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Sub, std::move(a), std::move(b)); }
HistExpr eq(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Eq, std::move(a), std::move(b)); }
HistExpr ne(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Ne, std::move(a), std::move(b)); }
HistExpr lt(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Lt, std::move(a), std::move(b)); }
HistExpr gt(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Gt, std::move(a), std::move(b)); }
HistExpr le(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Le, std::move(a), std::move(b)); }
HistExpr ge(HistExpr a, HistExpr b) { return node(HistExpr::Kind::Ge, std::move(a), std::move(b)); }
HistExpr all(std::vector<HistExpr> terms) {
    if (terms.size() == 1) return std::move(terms.front());
    return HistExpr{HistExpr::Kind::And, 0, std::move(terms)};
}
}  // namespace hist

AnonymousGame::AnonymousGame(std::vector<std::string> strategies, std::vector<AnonymousPlayer> players)
    : strategies_(std::move(strategies)), players_(std::move(players)) {
    if (strategies_.empty()) throw ConfigError("anonymous game needs at least one strategy");
    if (players_.empty()) throw ConfigError("anonymous game needs at least one player");
    const auto k = strategies_.size();
    allowed_.assign(players_.size(), std::vector<bool>(k, false));
    rule_index_.assign(players_.size(), std::vector<std::vector<std::uint32_t>>(k));
    for (PlayerId i = 0; i < players_.size(); ++i) {
        const auto& p = players_[i];
        for (std::size_t a = 0; a < p.allowed.size(); ++a) {
            if (p.allowed[a] >= k) throw ConfigError("player '" + p.name + "' allows undeclared strategy");
            if (a > 0 && p.allowed[a - 1] >= p.allowed[a])
                throw ConfigError("player '" + p.name + "' allowed list is not sorted and unique");
            allowed_[i][p.allowed[a]] = true;
        }
        for (std::uint32_t r = 0; r < p.rules.size(); ++r) {
            const auto& rule = p.rules[r];
            if (rule.strategy >= k) throw ConfigError("player '" + p.name + "' has a rule for an undeclared strategy");
            try {
                rule.when.validate(k);
            } catch (const ConfigError& e) {
                throw ConfigError("player '" + p.name + "' rule " + std::to_string(r) + ": " + e.what());
            }
            rule_index_[i][rule.strategy].push_back(r);
        }
    }
}

std::optional<StrategyId> AnonymousGame::find_strategy(const std::string& name) const {
    auto it = std::find(strategies_.begin(), strategies_.end(), name);
    if (it == strategies_.end()) return std::nullopt;
    return static_cast<StrategyId>(it - strategies_.begin());
}

std::vector<std::uint32_t> AnonymousGame::histogram(const StrategyProfile& profile) const {
    std::vector<std::uint32_t> h(strategies_.size(), 0);
    for (auto s : profile.choices) ++h[s];
    return h;
}

Payoff AnonymousGame::utility_at(PlayerId player, StrategyId strategy, std::span<const std::uint32_t> h) const {
    if (!allowed_[player][strategy]) return 0;
    const auto& rules = players_[player].rules;
    for (auto r : rule_index_[player][strategy])
        if (rules[r].when.eval_bool(h)) return 2;
    return 1;
}

Payoff AnonymousGame::utility(PlayerId player, const StrategyProfile& profile) const {
    const auto h = histogram(profile);
    return utility_at(player, profile[player], h);
}

void AnonymousGame::deviation_utilities(PlayerId player, const StrategyProfile& profile,
                                        std::vector<Payoff>& out) const {
    auto h = histogram(profile);
    const auto current = profile[player];
    out.resize(strategies_.size());
    --h[current];
    for (StrategyId s = 0; s < strategies_.size(); ++s) {
        ++h[s];
        out[s] = utility_at(player, s, h);
        --h[s];
    }
}

}  // namespace sinkeq
