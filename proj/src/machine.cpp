#include "sinkeq/machine.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace sinkeq {

char to_char(Symbol s) {
    switch (s) {
        case Symbol::Zero: return '0';
        case Symbol::One: return '1';
        case Symbol::Blank: return 'b';
    }
    return '?';
}

Symbol symbol_from_char(char c) {
    switch (c) {
        case '0': return Symbol::Zero;
        case '1': return Symbol::One;
        case 'b': return Symbol::Blank;
        default: throw ConfigError(std::string("unknown tape symbol '") + c + "'");
    }
}

char to_char(HeadMove m) {
    switch (m) {
        case HeadMove::L: return 'L';
        case HeadMove::S: return 'S';
        case HeadMove::R: return 'R';
    }
    return '?';
}

HeadMove head_move_from_char(char c) {
    switch (c) {
        case 'L': return HeadMove::L;
        case 'S': return HeadMove::S;
        case 'R': return HeadMove::R;
        default: throw ConfigError(std::string("unknown head move '") + c + "'");
    }
}

TMSpec::TMSpec(std::vector<std::string> state_names, std::uint32_t initial_state, std::uint32_t halt_state,
               std::uint32_t bound, std::optional<std::uint32_t> accept_state)
    : states(std::move(state_names)),
      initial(initial_state),
      halt(halt_state),
      accept(accept_state),
      tape_bound(bound),
      delta(states.size() * kAlphabetSize) {}

std::optional<std::uint32_t> TMSpec::find_state(const std::string& name) const {
    for (std::uint32_t q = 0; q < states.size(); ++q)
        if (states[q] == name) return q;
    return std::nullopt;
}

void TMSpec::validate() const {
    const auto n = states.size();
    if (n == 0) throw ConfigError("machine has no states");
    if (initial >= n || halt >= n) throw ConfigError("initial or halting state out of range");
    if (accept && (*accept >= n || *accept == halt)) throw ConfigError("accepting state out of range or equal to q_h");
    if (delta.size() != n * kAlphabetSize) throw ConfigError("transition table has wrong size");
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            if (states[a] == states[b]) throw ConfigError("duplicate state name '" + states[a] + "'");
    for (std::uint32_t q = 0; q < n; ++q)
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
            const auto& t = delta[q * kAlphabetSize + s];
            const std::string where = "delta(" + states[q] + "," + to_char(static_cast<Symbol>(s)) + ")";
            if (is_final(q)) {
                if (t) throw ConfigError(where + " defined on a final state");
            } else {
                if (!t) throw ConfigError(where + " undefined");
                if (t->next >= n) throw ConfigError(where + " targets an unknown state");
            }
        }
}

std::size_t TapeConfigHash::operator()(const TapeConfig& c) const noexcept {
    std::uint64_t h = c.state * 0x9e3779b97f4a7c15ULL ^ (c.head + 0x632be59bd9b4e019ULL);
    for (auto s : c.tape) h = (h ^ static_cast<std::uint64_t>(s)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
}

std::string to_string(const TMSpec& spec, const TapeConfig& c) {
    std::string tape;
    for (std::size_t i = 0; i < c.tape.size(); ++i) {
        if (i == c.head) tape += '[';
        tape += to_char(c.tape[i]);
        if (i == c.head) tape += ']';
    }
    const std::string q = c.state < spec.states.size() ? spec.states[c.state] : "#" + std::to_string(c.state);
    return q + " " + tape;
}

TapeConfig initial_config(const TMSpec& spec) {
    return TapeConfig{spec.initial, 0, std::vector<Symbol>(spec.tape_bound + 1, Symbol::Blank)};
}

TapeConfig tm_step(const TMSpec& spec, const TapeConfig& config) {
    if (spec.is_final(config.state)) throw PreconditionError("tm_step from final state " + spec.states[config.state]);
    const auto& t = spec.transition(config.state, config.tape.at(config.head));
    if (!t) throw ConfigError("delta undefined at " + to_string(spec, config));
    const auto head = static_cast<std::int64_t>(config.head) + static_cast<int>(t->move);
    if (head < 0 || head > static_cast<std::int64_t>(spec.tape_bound))
        throw BoundViolation("head leaves [0," + std::to_string(spec.tape_bound) + "] from " + to_string(spec, config));
    TapeConfig next = config;
    next.tape[config.head] = t->write;
    next.head = static_cast<std::uint32_t>(head);
    next.state = t->next;
    return next;
}

RunOutcome run_bounded(const TMSpec& spec, const TapeConfig& start, std::uint64_t cap) {
    std::unordered_map<TapeConfig, std::uint64_t, TapeConfigHash> seen;
    TapeConfig c = start;
    for (std::uint64_t step = 0;; ++step) {
        if (spec.is_final(c.state)) {
            RunOutcome r;
            r.kind = RunOutcome::Kind::Halts;
            r.steps = step;
            r.final_config = c;
            return r;
        }
        auto [it, fresh] = seen.emplace(c, step);
        if (!fresh) {
            RunOutcome r;
            r.kind = RunOutcome::Kind::Loops;
            r.prefix = it->second;
            r.period = step - it->second;
            return r;
        }
        if (seen.size() > cap) throw CapExceeded(cap, "configuration count exceeded; choose a smaller tape bound");
        c = tm_step(spec, c);
    }
}

std::uint32_t counter_width(std::size_t states, std::uint32_t t) {
    // ceil(log2(|Q| (t+1) 3^(t+1))) + 1, computed exactly on integers.
    unsigned __int128 configs = static_cast<unsigned __int128>(states) * (t + 1);
    for (std::uint32_t i = 0; i <= t; ++i) {
        configs *= 3;
        if (configs >> 100) throw ConfigError("tape bound too large for the step counter");
    }
    std::uint32_t bits = 0;
    while ((static_cast<unsigned __int128>(1) << bits) < configs) ++bits;
    return bits + 1;
}

TMSpec wrap_machine(const TMSpec& M, const std::vector<Symbol>& x, std::uint32_t t, std::uint32_t max_tape) {
    M.validate();
    if (x.size() > t) throw PreconditionError("input longer than the tape bound");
    const std::uint32_t w = counter_width(M.num_states(), t);
    const std::uint32_t tp = t + w;
    if (tp > max_tape) throw ConfigError("wrapped tape bound " + std::to_string(tp) + " exceeds maximum " +
                                         std::to_string(max_tape));

    std::vector<std::string> names;
    std::unordered_map<std::string, std::uint32_t> ids;
    auto id = [&](const std::string& name) {
        auto [it, fresh] = ids.emplace(name, static_cast<std::uint32_t>(names.size()));
        if (fresh) names.push_back(name);
        return it->second;
    };
    const auto qname = [&](std::uint32_t q) { return M.states[q]; };
    auto sim = [&](std::uint32_t q, std::uint32_t h) { return "sim_" + qname(q) + "_" + std::to_string(h); };
    auto go = [&](std::uint32_t q, std::uint32_t h, std::uint32_t p) {
        return "go_" + qname(q) + "_" + std::to_string(h) + "_" + std::to_string(p);
    };
    auto inc = [&](std::uint32_t q, std::uint32_t h, std::uint32_t p) {
        return "inc_" + qname(q) + "_" + std::to_string(h) + "_" + std::to_string(p);
    };
    auto back = [&](std::uint32_t q, std::uint32_t h, std::uint32_t p) {
        return "back_" + qname(q) + "_" + std::to_string(h) + "_" + std::to_string(p);
    };
    auto reset_right = [](std::uint32_t p) { return "clear_r_" + std::to_string(p); };
    auto reset_left = [](std::uint32_t p) { return "clear_l_" + std::to_string(p); };
    auto write_name = [](std::size_t k) { return "write_" + std::to_string(k); };
    auto ret_name = [](std::uint32_t h) { return "ret_" + std::to_string(h); };

    // Transitions collected as (state name, symbol) -> (next name, write, move).
    struct Rule {
        std::string from;
        std::uint32_t symbol;
        std::string to;
        std::optional<Symbol> write;  // nullopt: keep the read symbol
        HeadMove move;
    };
    std::vector<Rule> rules;
    auto every = [&](const std::string& from, const std::string& to, std::optional<Symbol> write, HeadMove move) {
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) rules.push_back(Rule{from, s, to, write, move});
    };

    const std::string initial_name = x.empty() ? ret_name(0) : write_name(0);
    id(initial_name);

    // Write x, then walk back to cell 0.
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto next = k + 1 < x.size() ? write_name(k + 1) : ret_name(static_cast<std::uint32_t>(x.size()));
        every(write_name(k), next, x[k], HeadMove::R);
    }
    for (std::uint32_t h = static_cast<std::uint32_t>(x.size()); h > 0; --h) every(ret_name(h), ret_name(h - 1), std::nullopt, HeadMove::L);

    // Entering M-state q2 at cell h2 after writing; final states and breaches
    // are decided here, otherwise the counter is bumped first.
    auto after_m_step = [&](const std::string& from, std::uint32_t symbol, std::uint32_t q2, Symbol write,
                            std::int64_t h, HeadMove move) {
        const std::int64_t h2 = h + static_cast<int>(move);
        if (q2 == M.halt) {
            rules.push_back(Rule{from, symbol, "halt", write, HeadMove::S});
        } else if ((M.accept && q2 == *M.accept) || h2 < 0 || h2 > static_cast<std::int64_t>(t)) {
            rules.push_back(Rule{from, symbol, reset_right(static_cast<std::uint32_t>(h + 1)), Symbol::Blank, HeadMove::R});
        } else {
            rules.push_back(Rule{from, symbol, go(q2, static_cast<std::uint32_t>(h2), static_cast<std::uint32_t>(h2)), write, move});
        }
    };

    // Ret_0 starts M from q0 at cell 0 without consuming a step of M.
    if (M.initial == M.halt) {
        every(ret_name(0), "halt", std::nullopt, HeadMove::S);
    } else if (M.accept && M.initial == *M.accept) {
        every(ret_name(0), reset_right(1), Symbol::Blank, HeadMove::R);
    } else {
        every(ret_name(0), sim(M.initial, 0), std::nullopt, HeadMove::S);
    }

    for (std::uint32_t q = 0; q < M.num_states(); ++q) {
        if (M.is_final(q)) continue;
        for (std::uint32_t h = 0; h <= t; ++h) {
            for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
                const auto& tr = *M.transition(q, static_cast<Symbol>(s));
                after_m_step(sim(q, h), s, tr.next, tr.write, h, tr.move);
            }
            // Walk right to the counter, increment with carry, walk back.
            for (std::uint32_t p = h; p <= t; ++p)
                every(go(q, h, p), p == t ? inc(q, h, t + 1) : go(q, h, p + 1), std::nullopt, HeadMove::R);
            for (std::uint32_t p = t + 1; p <= tp; ++p) {
                const auto here = inc(q, h, p);
                const auto landing = p - 1 == h ? sim(q, h) : back(q, h, p - 1);
                for (auto s : {Symbol::Zero, Symbol::Blank})
                    rules.push_back(Rule{here, static_cast<std::uint32_t>(s), landing, Symbol::One, HeadMove::L});
                if (p < tp) {
                    rules.push_back(Rule{here, 1, inc(q, h, p + 1), Symbol::Zero, HeadMove::R});
                } else {
                    rules.push_back(Rule{here, 1, reset_left(tp - 1), Symbol::Blank, HeadMove::L});
                }
            }
            for (std::uint32_t p = tp - 1; p > h; --p)
                every(back(q, h, p), p - 1 == h ? sim(q, h) : back(q, h, p - 1), std::nullopt, HeadMove::L);
        }
    }

    // Erase: right to t', then left to 0, then restart.
    for (std::uint32_t p = 1; p <= tp; ++p)
        every(reset_right(p), p < tp ? reset_right(p + 1) : reset_left(tp - 1), Symbol::Blank,
              p < tp ? HeadMove::R : HeadMove::L);
    for (std::uint32_t p = tp; p-- > 0;)
        every(reset_left(p), p > 0 ? reset_left(p - 1) : initial_name, Symbol::Blank, p > 0 ? HeadMove::L : HeadMove::S);

    // Only states that are actually entered (or the initial state) are kept.
    std::vector<std::string> used{initial_name};
    {
        std::unordered_map<std::string, std::vector<const Rule*>> by_state;
        for (const auto& r : rules) by_state[r.from].push_back(&r);
        std::unordered_map<std::string, bool> seen{{initial_name, true}};
        for (std::size_t k = 0; k < used.size(); ++k) {
            for (const auto* r : by_state[used[k]])
                if (!seen[r->to]) {
                    seen[r->to] = true;
                    used.push_back(r->to);
                }
        }
        for (const auto& n : used) id(n);
        id("halt");
    }

    TMSpec out(names, 0, ids.at("halt"), tp);
    for (const auto& r : rules) {
        auto from = ids.find(r.from);
        if (from == ids.end()) continue;
        out.set(from->second, static_cast<Symbol>(r.symbol),
                Transition{ids.at(r.to), r.write.value_or(static_cast<Symbol>(r.symbol)), r.move});
    }
    out.validate();
    return out;
}

namespace desk {

TMSpec looper(std::uint32_t tape_bound) {
    TMSpec m({"q0", "qh"}, 0, 1, tape_bound);
    m.set(0, Symbol::Blank, {0, Symbol::One, HeadMove::S});
    m.set(0, Symbol::One, {0, Symbol::Zero, HeadMove::S});
    m.set(0, Symbol::Zero, {0, Symbol::Blank, HeadMove::S});
    return m;
}

TMSpec halter(std::uint32_t tape_bound) {
    TMSpec m({"q0", "qh"}, 0, 1, tape_bound);
    m.set(0, Symbol::Blank, {1, Symbol::One, HeadMove::R});
    m.set(0, Symbol::Zero, {1, Symbol::Zero, HeadMove::S});
    m.set(0, Symbol::One, {1, Symbol::One, HeadMove::S});
    return m;
}

TMSpec bouncer(std::uint32_t tape_bound) {
    TMSpec m({"q0", "q1", "qh"}, 0, 2, tape_bound);
    m.set(0, Symbol::Blank, {1, Symbol::One, HeadMove::R});
    m.set(0, Symbol::Zero, {1, Symbol::Zero, HeadMove::R});
    m.set(0, Symbol::One, {1, Symbol::One, HeadMove::R});
    for (auto s : {Symbol::Zero, Symbol::One, Symbol::Blank}) m.set(1, s, {0, Symbol::Zero, HeadMove::L});
    return m;
}

}  // namespace desk

}  // namespace sinkeq
