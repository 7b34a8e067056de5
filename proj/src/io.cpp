#include "sinkeq/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sinkeq/anonymous.hpp"
#include "sinkeq/congestion.hpp"
#include "sinkeq/market.hpp"
#include "sinkeq/valid_utility.hpp"

namespace sinkeq::io {
namespace {

// ---------------------------------------------------------------- reading helpers

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const Json& field(const Json& obj, const std::string& path, const std::string& key) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(child(path, key), "missing field");
    return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const Json& array_at(const Json& obj, const std::string& path, const std::string& key) {
    const Json& v = field(obj, path, key);
    if (!v.is_array()) throw ParseError(child(path, key), "expected an array");
    return v;
}

std::int64_t as_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t as_uint(const Json& v, const std::string& path) {
    const auto x = as_int(v, path);
    if (x < 0) throw ParseError(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

std::uint32_t as_u32(const Json& v, const std::string& path) {
    const auto x = as_uint(v, path);
    if (x > 0xffffffffULL) throw ParseError(path, "integer out of range");
    return static_cast<std::uint32_t>(x);
}

std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "expected a string");
    return v.get<std::string>();
}

std::vector<std::uint32_t> index_list(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected an array");
    std::vector<std::uint32_t> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_u32(v[k], child(path, k)));
    return out;
}

std::vector<Payoff> int_list(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected an array");
    std::vector<Payoff> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_int(v[k], child(path, k)));
    return out;
}

std::vector<std::string> string_list(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_string(v[k], child(path, k)));
    return out;
}

void require_sorted_unique(const std::vector<std::uint32_t>& v, const std::string& path) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k - 1] >= v[k]) throw ParseError(path, "index array must be sorted and unique");
}

// Construction invariants surface as parse errors pointing at the document root.
template <class F>
auto build(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ParseError(path, e.what());
    }
}

// ---------------------------------------------------------------- table

Json table_to_json(const TableGame& g) {
    Json j;
    j["class"] = "table";
    j["strategy_counts"] = g.strategy_counts();
    j["payoffs"] = g.payoffs();
    if (g.has_names()) {
        Json players = Json::array(), strategies = Json::array();
        for (PlayerId i = 0; i < g.num_players(); ++i) {
            players.push_back(g.player_name(i));
            Json names = Json::array();
            for (StrategyId s = 0; s < g.num_strategies(i); ++s) names.push_back(g.strategy_name(i, s));
            strategies.push_back(std::move(names));
        }
        j["players"] = std::move(players);
        j["strategies"] = std::move(strategies);
    }
    return j;
}

GamePtr table_from_json(const Json& j) {
    const std::string root;
    auto counts = index_list(field(j, root, "strategy_counts"), "/strategy_counts");
    const Json& rows = array_at(j, root, "payoffs");
    std::vector<std::vector<Payoff>> payoffs;
    for (std::size_t k = 0; k < rows.size(); ++k) payoffs.push_back(int_list(rows[k], child("/payoffs", k)));
    std::vector<std::string> players;
    std::vector<std::vector<std::string>> strategies;
    if (auto p = optional_field(j, "players")) players = string_list(*p, "/players");
    if (auto s = optional_field(j, "strategies")) {
        if (!s->is_array()) throw ParseError("/strategies", "expected an array");
        for (std::size_t k = 0; k < s->size(); ++k) strategies.push_back(string_list((*s)[k], child("/strategies", k)));
    }
    return build(root, [&] {
        return std::make_shared<TableGame>(std::move(counts), std::move(payoffs), std::move(players), std::move(strategies));
    });
}

// ---------------------------------------------------------------- congestion

Json delay_to_json(const DelayTable& d) {
    Json j;
    j["values"] = d.values;
    if (d.tail) j["tail"] = *d.tail;
    return j;
}

DelayTable delay_from_json(const Json& j, const std::string& path) {
    if (j.is_string()) {
        try {
            return DelayTable::parse_shorthand(j.get<std::string>());
        } catch (const ConfigError& e) {
            throw ParseError(path, e.what());
        }
    }
    DelayTable d;
    d.values = int_list(field(j, path, "values"), child(path, "values"));
    if (auto t = optional_field(j, "tail")) d.tail = as_int(*t, child(path, "tail"));
    return d;
}

Json congestion_to_json(const CongestionGame& g) {
    Json j;
    j["class"] = "congestion";
    j["mode"] = g.mode() == DelayMode::Shared ? "shared" : "player_specific";
    Json resources = Json::array();
    for (const auto& r : g.resources()) {
        Json rj;
        rj["name"] = r.name;
        if (g.mode() == DelayMode::Shared) {
            rj["delay"] = delay_to_json(r.delay);
        } else {
            Json per = Json::array();
            for (PlayerId i = 0; i < g.num_players(); ++i)
                per.push_back(i < r.player_delays.size() && r.player_delays[i] ? delay_to_json(*r.player_delays[i]) : Json());
            rj["player_delays"] = std::move(per);
        }
        resources.push_back(std::move(rj));
    }
    j["resources"] = std::move(resources);
    Json players = Json::array();
    for (const auto& p : g.players()) {
        Json pj;
        pj["name"] = p.name;
        pj["weight"] = p.weight;
        Json strategies = Json::array();
        for (const auto& s : p.strategies) strategies.push_back(Json{{"name", s.name}, {"resources", s.resources}});
        pj["strategies"] = std::move(strategies);
        players.push_back(std::move(pj));
    }
    j["players"] = std::move(players);
    return j;
}

GamePtr congestion_from_json(const Json& j) {
    const auto mode_text = as_string(field(j, "", "mode"), "/mode");
    DelayMode mode;
    if (mode_text == "shared") mode = DelayMode::Shared;
    else if (mode_text == "player_specific") mode = DelayMode::PlayerSpecific;
    else throw ParseError("/mode", "expected \"shared\" or \"player_specific\"");

    std::vector<CongestionResource> resources;
    const Json& rs = array_at(j, "", "resources");
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const auto path = child("/resources", k);
        CongestionResource r;
        r.name = as_string(field(rs[k], path, "name"), child(path, "name"));
        if (mode == DelayMode::Shared) {
            r.delay = delay_from_json(field(rs[k], path, "delay"), child(path, "delay"));
        } else {
            const Json& per = array_at(rs[k], path, "player_delays");
            for (std::size_t i = 0; i < per.size(); ++i) {
                if (per[i].is_null()) r.player_delays.emplace_back();
                else r.player_delays.push_back(delay_from_json(per[i], child(child(path, "player_delays"), i)));
            }
        }
        resources.push_back(std::move(r));
    }
    std::vector<CongestionPlayer> players;
    const Json& ps = array_at(j, "", "players");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto path = child("/players", k);
        CongestionPlayer p;
        p.name = as_string(field(ps[k], path, "name"), child(path, "name"));
        if (auto w = optional_field(ps[k], "weight")) p.weight = as_int(*w, child(path, "weight"));
        const Json& ss = array_at(ps[k], path, "strategies");
        for (std::size_t s = 0; s < ss.size(); ++s) {
            const auto sp = child(child(path, "strategies"), s);
            CongestionStrategy st;
            st.name = as_string(field(ss[s], sp, "name"), child(sp, "name"));
            st.resources = index_list(field(ss[s], sp, "resources"), child(sp, "resources"));
            require_sorted_unique(st.resources, child(sp, "resources"));
            for (auto r : st.resources)
                if (r >= resources.size()) throw ParseError(child(sp, "resources"), "undeclared resource " + std::to_string(r));
            p.strategies.push_back(std::move(st));
        }
        players.push_back(std::move(p));
    }
    return build("", [&] { return std::make_shared<CongestionGame>(mode, std::move(resources), std::move(players)); });
}

// ---------------------------------------------------------------- anonymous

Json expr_to_json(const HistExpr& e) {
    Json j;
    j["op"] = std::string(to_string(e.kind));
    if (e.kind == HistExpr::Kind::Const) j["value"] = e.value;
    else if (e.kind == HistExpr::Kind::Count) j["strategy"] = e.value;
    else {
        Json args = Json::array();
        for (const auto& a : e.args) args.push_back(expr_to_json(a));
        j["args"] = std::move(args);
    }
    return j;
}

HistExpr expr_from_json(const Json& j, const std::string& path) {
    static const std::vector<HistExpr::Kind> kinds = {
        HistExpr::Kind::Const, HistExpr::Kind::Count, HistExpr::Kind::Add, HistExpr::Kind::Sub,
        HistExpr::Kind::Eq,    HistExpr::Kind::Ne,    HistExpr::Kind::Lt,  HistExpr::Kind::Gt,
        HistExpr::Kind::Le,    HistExpr::Kind::Ge,    HistExpr::Kind::And};
    const auto op = as_string(field(j, path, "op"), child(path, "op"));
    auto it = std::find_if(kinds.begin(), kinds.end(), [&](auto k) { return to_string(k) == op; });
    if (it == kinds.end()) throw ParseError(child(path, "op"), "unknown operator '" + op + "'");
    HistExpr e;
    e.kind = *it;
    if (e.kind == HistExpr::Kind::Const) e.value = as_int(field(j, path, "value"), child(path, "value"));
    else if (e.kind == HistExpr::Kind::Count) e.value = as_int(field(j, path, "strategy"), child(path, "strategy"));
    else {
        const Json& args = array_at(j, path, "args");
        for (std::size_t k = 0; k < args.size(); ++k) e.args.push_back(expr_from_json(args[k], child(child(path, "args"), k)));
    }
    return e;
}

Json anonymous_to_json(const AnonymousGame& g) {
    Json j;
    j["class"] = "anonymous";
    j["strategies"] = g.strategies();
    Json players = Json::array();
    for (const auto& p : g.players()) {
        Json rules = Json::array();
        for (const auto& r : p.rules) rules.push_back(Json{{"strategy", r.strategy}, {"when", expr_to_json(r.when)}});
        players.push_back(Json{{"name", p.name}, {"allowed", p.allowed}, {"rules", std::move(rules)}});
    }
    j["players"] = std::move(players);
    return j;
}

GamePtr anonymous_from_json(const Json& j) {
    auto strategies = string_list(field(j, "", "strategies"), "/strategies");
    std::vector<AnonymousPlayer> players;
    const Json& ps = array_at(j, "", "players");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto path = child("/players", k);
        AnonymousPlayer p;
        p.name = as_string(field(ps[k], path, "name"), child(path, "name"));
        p.allowed = index_list(field(ps[k], path, "allowed"), child(path, "allowed"));
        require_sorted_unique(p.allowed, child(path, "allowed"));
        const Json& rules = array_at(ps[k], path, "rules");
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const auto rp = child(child(path, "rules"), r);
            AnonymousRule rule;
            rule.strategy = as_u32(field(rules[r], rp, "strategy"), child(rp, "strategy"));
            rule.when = expr_from_json(field(rules[r], rp, "when"), child(rp, "when"));
            try {
                rule.when.validate(strategies.size());
            } catch (const ConfigError& e) {
                throw ParseError(child(rp, "when"), e.what());
            }
            p.rules.push_back(std::move(rule));
        }
        players.push_back(std::move(p));
    }
    return build("", [&] { return std::make_shared<AnonymousGame>(std::move(strategies), std::move(players)); });
}

// ---------------------------------------------------------------- market

Json market_to_json(const MarketGame& g) {
    Json j;
    j["class"] = "market";
    Json passive = Json::array();
    for (const auto& y : g.passive())
        passive.push_back(Json{{"name", y.name}, {"value", y.value}, {"preference", y.preference}});
    j["passive"] = std::move(passive);
    Json players = Json::array();
    for (const auto& p : g.players()) {
        Json strategies = Json::array();
        for (const auto& s : p.strategies) strategies.push_back(Json{{"name", s.name}, {"demand", s.demand}});
        players.push_back(Json{{"name", p.name}, {"strategies", std::move(strategies)}});
    }
    j["players"] = std::move(players);
    return j;
}

GamePtr market_from_json(const Json& j) {
    std::vector<PassiveAgent> passive;
    const Json& ys = array_at(j, "", "passive");
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const auto path = child("/passive", k);
        PassiveAgent y;
        y.name = as_string(field(ys[k], path, "name"), child(path, "name"));
        y.value = as_int(field(ys[k], path, "value"), child(path, "value"));
        y.preference = index_list(field(ys[k], path, "preference"), child(path, "preference"));
        passive.push_back(std::move(y));
    }
    std::vector<MarketPlayer> players;
    const Json& ps = array_at(j, "", "players");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto path = child("/players", k);
        MarketPlayer p;
        p.name = as_string(field(ps[k], path, "name"), child(path, "name"));
        const Json& ss = array_at(ps[k], path, "strategies");
        for (std::size_t s = 0; s < ss.size(); ++s) {
            const auto sp = child(child(path, "strategies"), s);
            MarketStrategy st;
            st.name = as_string(field(ss[s], sp, "name"), child(sp, "name"));
            st.demand = index_list(field(ss[s], sp, "demand"), child(sp, "demand"));
            require_sorted_unique(st.demand, child(sp, "demand"));
            p.strategies.push_back(std::move(st));
        }
        players.push_back(std::move(p));
    }
    return build("", [&] { return std::make_shared<MarketGame>(std::move(passive), std::move(players)); });
}

// ---------------------------------------------------------------- valid utility

Json valid_utility_to_json(const ValidUtilityGame& g) {
    Json j;
    j["class"] = "valid_utility";
    j["elements"] = g.element_count();
    Json players = Json::array();
    for (const auto& p : g.players())
        players.push_back(Json{{"name", p.name}, {"ground", p.ground}, {"feasible", p.feasible}});
    j["players"] = std::move(players);
    const auto& social = g.social_function();
    if (social.kind == SocialFunction::Kind::Coverage) j["social"] = Json{{"kind", "coverage"}, {"weights", social.weights}};
    else j["social"] = Json{{"kind", "table"}, {"values", social.values}};
    const auto& util = g.utility_function();
    if (util.kind == UtilityFunction::Kind::Marginal) j["utility"] = Json{{"kind", "marginal"}};
    else j["utility"] = Json{{"kind", "table"}, {"values", util.values}};
    return j;
}

GamePtr valid_utility_from_json(const Json& j) {
    const auto elements = as_uint(field(j, "", "elements"), "/elements");
    std::vector<ValidUtilityPlayer> players;
    const Json& ps = array_at(j, "", "players");
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto path = child("/players", k);
        ValidUtilityPlayer p;
        p.name = as_string(field(ps[k], path, "name"), child(path, "name"));
        p.ground = index_list(field(ps[k], path, "ground"), child(path, "ground"));
        const Json& fs = array_at(ps[k], path, "feasible");
        for (std::size_t s = 0; s < fs.size(); ++s) {
            const auto fp = child(child(path, "feasible"), s);
            auto set = index_list(fs[s], fp);
            require_sorted_unique(set, fp);
            p.feasible.push_back(std::move(set));
        }
        players.push_back(std::move(p));
    }
    SocialFunction social;
    const Json& sj = field(j, "", "social");
    const auto skind = as_string(field(sj, "/social", "kind"), "/social/kind");
    if (skind == "coverage") {
        social.kind = SocialFunction::Kind::Coverage;
        social.weights = int_list(field(sj, "/social", "weights"), "/social/weights");
    } else if (skind == "table") {
        social.kind = SocialFunction::Kind::Table;
        social.values = int_list(field(sj, "/social", "values"), "/social/values");
    } else {
        throw ParseError("/social/kind", "expected \"coverage\" or \"table\"");
    }
    UtilityFunction util;
    const Json& uj = field(j, "", "utility");
    const auto ukind = as_string(field(uj, "/utility", "kind"), "/utility/kind");
    if (ukind == "marginal") {
        util.kind = UtilityFunction::Kind::Marginal;
    } else if (ukind == "table") {
        util.kind = UtilityFunction::Kind::Table;
        const Json& rows = array_at(uj, "/utility", "values");
        for (std::size_t k = 0; k < rows.size(); ++k) util.values.push_back(int_list(rows[k], child("/utility/values", k)));
    } else {
        throw ParseError("/utility/kind", "expected \"marginal\" or \"table\"");
    }
    return build("", [&] {
        return std::make_shared<ValidUtilityGame>(elements, std::move(players), std::move(social), std::move(util));
    });
}

}  // namespace

// ---------------------------------------------------------------- games

Json game_to_json(const Game& game) {
    if (auto g = dynamic_cast<const TableGame*>(&game)) return table_to_json(*g);
    if (auto g = dynamic_cast<const CongestionGame*>(&game)) return congestion_to_json(*g);
    if (auto g = dynamic_cast<const AnonymousGame*>(&game)) return anonymous_to_json(*g);
    if (auto g = dynamic_cast<const MarketGame*>(&game)) return market_to_json(*g);
    if (auto g = dynamic_cast<const ValidUtilityGame*>(&game)) return valid_utility_to_json(*g);
    throw UnsupportedOperation("game has no document form");
}

GamePtr game_from_json(const Json& doc) {
    const auto cls = as_string(field(doc, "", "class"), "/class");
    if (cls == "table") return table_from_json(doc);
    if (cls == "congestion") return congestion_from_json(doc);
    if (cls == "anonymous") return anonymous_from_json(doc);
    if (cls == "market") return market_from_json(doc);
    if (cls == "valid_utility") return valid_utility_from_json(doc);
    throw ParseError("/class", "unknown class '" + cls + "'");
}

namespace {
Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
}
}  // namespace

std::string serialize_game(const Game& game) { return game_to_json(game).dump(1) + "\n"; }

GamePtr parse_game(std::string_view text) { return game_from_json(parse_json(text)); }

// ---------------------------------------------------------------- machines

Json tm_to_json(const TMSpec& spec) {
    Json j;
    j["states"] = spec.states;
    j["initial"] = spec.states.at(spec.initial);
    j["halt"] = spec.states.at(spec.halt);
    if (spec.accept) j["accept"] = spec.states.at(*spec.accept);
    j["tape_bound"] = spec.tape_bound;
    Json delta = Json::array();
    for (std::uint32_t q = 0; q < spec.num_states(); ++q)
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
            const auto& t = spec.transition(q, static_cast<Symbol>(s));
            if (!t) continue;
            delta.push_back(Json{{"state", spec.states[q]},
                                 {"read", std::string(1, to_char(static_cast<Symbol>(s)))},
                                 {"next_state", spec.states[t->next]},
                                 {"write", std::string(1, to_char(t->write))},
                                 {"move", std::string(1, to_char(t->move))}});
        }
    j["delta"] = std::move(delta);
    return j;
}

TMSpec tm_from_json(const Json& doc) {
    auto states = string_list(field(doc, "", "states"), "/states");
    auto state_index = [&](const Json& v, const std::string& path) {
        const auto name = as_string(v, path);
        auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end()) throw ParseError(path, "unknown state '" + name + "'");
        return static_cast<std::uint32_t>(it - states.begin());
    };
    auto one_char = [](const Json& v, const std::string& path) {
        if (!v.is_string() || v.get<std::string>().size() != 1) throw ParseError(path, "expected a one-character string");
        return v.get<std::string>()[0];
    };
    const auto initial = state_index(field(doc, "", "initial"), "/initial");
    const auto halt = state_index(field(doc, "", "halt"), "/halt");
    std::optional<std::uint32_t> accept;
    if (auto a = optional_field(doc, "accept")) accept = state_index(*a, "/accept");
    const auto bound = as_u32(field(doc, "", "tape_bound"), "/tape_bound");
    TMSpec spec;
    try {
        spec = TMSpec(states, initial, halt, bound, accept);
    } catch (const ConfigError& e) {
        throw ParseError("", e.what());
    }
    const Json& delta = array_at(doc, "", "delta");
    for (std::size_t k = 0; k < delta.size(); ++k) {
        const auto path = child("/delta", k);
        const auto& d = delta[k];
        try {
            const auto q = state_index(field(d, path, "state"), child(path, "state"));
            const auto read = symbol_from_char(one_char(field(d, path, "read"), child(path, "read")));
            Transition t;
            t.next = state_index(field(d, path, "next_state"), child(path, "next_state"));
            t.write = symbol_from_char(one_char(field(d, path, "write"), child(path, "write")));
            t.move = head_move_from_char(one_char(field(d, path, "move"), child(path, "move")));
            if (spec.transition(q, read)) throw ParseError(path, "duplicate transition");
            spec.set(q, read, t);
        } catch (const ConfigError& e) {
            throw ParseError(path, e.what());
        }
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ParseError("/delta", e.what());
    }
    return spec;
}

TMSpec parse_tm(std::string_view text) { return tm_from_json(parse_json(text)); }

Json formula_to_json(const CnfFormula& f) { return Json{{"variables", f.variables}, {"clauses", f.clauses}}; }

CnfFormula formula_from_json(const Json& doc) {
    CnfFormula f;
    f.variables = as_u32(field(doc, "", "variables"), "/variables");
    const Json& cs = array_at(doc, "", "clauses");
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto lits = int_list(cs[k], child("/clauses", k));
        if (lits.size() != 3) throw ParseError(child("/clauses", k), "clause needs exactly 3 literals");
        f.clauses.push_back({static_cast<std::int32_t>(lits[0]), static_cast<std::int32_t>(lits[1]),
                             static_cast<std::int32_t>(lits[2])});
    }
    try {
        f.validate();
    } catch (const ConfigError& e) {
        throw ParseError("/clauses", e.what());
    }
    return f;
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    bool header = false;
    std::size_t declared = 0;
    std::vector<std::int32_t> current;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = "line " + std::to_string(line_no);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == 'c') continue;
        if (line[first] == '%') break;  // SATLIB trailer
        std::istringstream ls(line);
        if (line[first] == 'p') {
            std::string p, cnf;
            long long vars = -1, clauses = -1;
            if (header || !(ls >> p >> cnf >> vars >> clauses) || cnf != "cnf" || vars < 1 || clauses < 0)
                throw ParseError(where, "bad or repeated 'p cnf <variables> <clauses>' header");
            f.variables = static_cast<std::uint32_t>(vars);
            declared = static_cast<std::size_t>(clauses);
            header = true;
            continue;
        }
        if (!header) throw ParseError(where, "clause before the 'p cnf' header");
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                const auto clause_no = f.clauses.size() + 1;
                if (current.size() != 3)
                    throw ParseError(where, "clause " + std::to_string(clause_no) + " has " + std::to_string(current.size()) +
                                                " literals, expected 3");
                f.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
                continue;
            }
            if (lit < -static_cast<long long>(f.variables) || lit > static_cast<long long>(f.variables))
                throw ParseError(where, "literal " + std::to_string(lit) + " outside the declared variables");
            current.push_back(static_cast<std::int32_t>(lit));
        }
        if (!ls.eof()) throw ParseError(where, "unexpected token");
    }
    if (!header) throw ParseError("", "missing 'p cnf' header");
    if (!current.empty()) throw ParseError("", "last clause is not terminated by 0");
    if (f.clauses.size() != declared)
        throw ParseError("", "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(f.clauses.size()));
    return f;
}

// ---------------------------------------------------------------- compiled reductions

Json sidecar_to_json(const CompiledReduction& c) {
    Json j;
    j["kind"] = std::string(to_string(c.kind));
    j["M"] = c.M;
    j["N"] = c.N;
    j["initial"] = c.initial.choices;
    Json roles = Json::object(), strategies = Json::object();
    for (PlayerId i = 0; i < c.roles.size(); ++i) {
        roles[c.roles[i]] = i;
        Json names = Json::object();
        for (StrategyId s = 0; s < c.game->num_strategies(i); ++s) names[c.game->strategy_name(i, s)] = s;
        strategies[c.roles[i]] = std::move(names);
    }
    j["roles"] = std::move(roles);
    j["strategies"] = std::move(strategies);
    if (c.machine) j["machine"] = tm_to_json(*c.machine);
    if (c.formula) j["formula"] = formula_to_json(*c.formula);
    return j;
}

CompiledReduction compiled_from_json(GamePtr game, const Json& doc) {
    CompiledReduction c;
    try {
        c.kind = parse_reduction_kind(as_string(field(doc, "", "kind"), "/kind"));
    } catch (const ConfigError& e) {
        throw ParseError("/kind", e.what());
    }
    c.M = as_int(field(doc, "", "M"), "/M");
    c.N = as_int(field(doc, "", "N"), "/N");
    c.initial = StrategyProfile(index_list(field(doc, "", "initial"), "/initial"));
    const Json& roles = field(doc, "", "roles");
    if (!roles.is_object()) throw ParseError("/roles", "expected an object");
    c.roles.assign(game->num_players(), "");
    for (auto it = roles.begin(); it != roles.end(); ++it) {
        const auto path = child("/roles", it.key());
        const auto p = as_u32(it.value(), path);
        if (p >= c.roles.size() || !c.roles[p].empty()) throw ParseError(path, "player index out of range or repeated");
        c.roles[p] = it.key();
    }
    for (PlayerId i = 0; i < c.roles.size(); ++i)
        if (c.roles[i].empty()) throw ParseError("/roles", "no role for player " + std::to_string(i));
    if (auto m = optional_field(doc, "machine")) {
        try {
            c.machine = tm_from_json(*m);
        } catch (const ParseError& e) {
            throw ParseError("/machine" + e.path(), e.what());
        }
    }
    if (auto f = optional_field(doc, "formula")) c.formula = formula_from_json(*f);
    c.game = std::move(game);
    try {
        c.game->check_profile(c.initial);
    } catch (const PreconditionError& e) {
        throw ParseError("/initial", e.what());
    }
    return c;
}

std::filesystem::path sidecar_path(const std::filesystem::path& game_path) {
    return std::filesystem::path(game_path.string() + ".sym.json");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

GamePtr load_game(const std::filesystem::path& path) { return parse_game(read_file(path)); }

void save_compiled(const std::filesystem::path& path, const CompiledReduction& c) {
    write_file(path, serialize_game(*c.game));
    write_file(sidecar_path(path), sidecar_to_json(c).dump(1) + "\n");
}

CompiledReduction load_compiled(const std::filesystem::path& path) {
    auto game = load_game(path);
    const auto side = sidecar_path(path);
    if (!std::filesystem::exists(side)) throw Error("missing symbol table " + side.string());
    return compiled_from_json(std::move(game), parse_json(read_file(side)));
}

}  // namespace sinkeq::io
