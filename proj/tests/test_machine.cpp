#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sinkeq/errors.hpp"
#include "sinkeq/machine.hpp"

using namespace sinkeq;

namespace {

std::vector<Symbol> word(const std::string& s) {
    std::vector<Symbol> out;
    for (char c : s) out.push_back(symbol_from_char(c));
    return out;
}

}  // namespace

TEST_CASE("symbol and move characters") {
    CHECK(to_char(Symbol::Blank) == 'b');
    CHECK(symbol_from_char('1') == Symbol::One);
    CHECK(head_move_from_char('L') == HeadMove::L);
    CHECK_THROWS(symbol_from_char('x'));
    CHECK_THROWS(head_move_from_char('Q'));
}

TEST_CASE("tm_step applies one transition") {
    auto m = desk::halter(2);
    auto c = initial_config(m);
    CHECK(c.tape == std::vector<Symbol>(3, Symbol::Blank));
    auto d = tm_step(m, c);
    CHECK(d.state == m.halt);
    CHECK(d.head == 1);
    CHECK(d.tape[0] == Symbol::One);
    CHECK_THROWS_AS(tm_step(m, d), PreconditionError);
}

TEST_CASE("tm_step refuses to leave the tape") {
    TMSpec m({"go", "h"}, 0, 1, 0);
    for (auto s : {Symbol::Zero, Symbol::One, Symbol::Blank}) m.set(0, s, Transition{0, s, HeadMove::L});
    CHECK_THROWS_AS(tm_step(m, initial_config(m)), BoundViolation);
}

TEST_CASE("validation catches missing and dangling transitions") {
    TMSpec m({"a", "h"}, 0, 1, 2);
    CHECK_THROWS_AS(m.validate(), ConfigError);
    for (auto s : {Symbol::Zero, Symbol::One, Symbol::Blank}) m.set(0, s, Transition{0, s, HeadMove::S});
    CHECK_NOTHROW(m.validate());
    m.set(1, Symbol::Zero, Transition{0, Symbol::Zero, HeadMove::S});
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("desk machines behave as described") {
    auto loop = run_bounded(desk::looper(2), initial_config(desk::looper(2)));
    CHECK_FALSE(loop.halts());
    CHECK(loop.period == 3);
    auto halt = run_bounded(desk::halter(2), initial_config(desk::halter(2)));
    CHECK(halt.halts());
    CHECK(halt.steps == 1);
    auto bounce = run_bounded(desk::bouncer(2), initial_config(desk::bouncer(2)));
    CHECK_FALSE(bounce.halts());
    CHECK(bounce.prefix > 0);
}

TEST_CASE("run_bounded agrees with the direct simulator on random machines") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        auto m = oracle::random_machine(rng, 3, 3);
        m.accept.reset();
        // Without an accept state the extra final state is just unreachable-or-halting;
        // fold it into q_h so the two agree on what halting means.
        for (auto& t : m.delta)
            if (t && t->next == 4) t->next = m.halt;
        m.states.pop_back();
        m.delta.resize(m.states.size() * kAlphabetSize);
        const auto v = oracle::direct_run(m, {}, 3);
        try {
            auto r = run_bounded(m, initial_config(m));
            CHECK(r.halts() == (v == oracle::Verdict::Rejects));
        } catch (const BoundViolation&) {
            // tm_step refuses a move off the tape even when it enters q_h.
            CHECK((v == oracle::Verdict::Breaches || v == oracle::Verdict::Rejects));
        }
    }
}

TEST_CASE("run_bounded honours its cap") {
    CHECK_THROWS_AS(run_bounded(desk::bouncer(4), initial_config(desk::bouncer(4)), 3), CapExceeded);
}

TEST_CASE("wrapped machines halt exactly when the inner machine rejects") {
    std::mt19937_64 rng(41);
    int halting = 0, looping = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = oracle::random_machine(rng, 2, 0);
        const std::uint32_t t = 2;
        std::vector<Symbol> x;
        for (std::uint32_t k = 0; k < trial % 3; ++k) x.push_back(static_cast<Symbol>(trial % 2));
        const auto w = wrap_machine(m, x, t);
        CHECK_NOTHROW(w.validate());
        const bool halts = run_bounded(w, initial_config(w)).halts();
        CHECK(halts == (oracle::direct_run(m, x, t) == oracle::Verdict::Rejects));
        (halts ? halting : looping) += 1;
    }
    CHECK(halting > 0);
    CHECK(looping > 0);
}

TEST_CASE("wrapper inputs and limits") {
    const auto m = desk::halter(2);
    CHECK_THROWS_AS(wrap_machine(m, word("0101"), 2), PreconditionError);
    CHECK_THROWS_AS(wrap_machine(m, {}, 40, 20), ConfigError);
    CHECK(counter_width(2, 2) >= 1);
    CHECK(counter_width(6, 5) > counter_width(2, 2));
}
