#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinkeq/errors.hpp"

namespace sinkeq {

/// Tape alphabet {0, 1, b} in this index order.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Blank = 2 };
inline constexpr std::uint32_t kAlphabetSize = 3;

char to_char(Symbol s);
Symbol symbol_from_char(char c);

enum class HeadMove : std::int8_t { L = -1, S = 0, R = 1 };

char to_char(HeadMove m);
HeadMove head_move_from_char(char c);

/// The head would leave [0, t'].
class BoundViolation : public Error {
public:
    using Error::Error;
};

struct Transition {
    std::uint32_t next = 0;
    Symbol write = Symbol::Blank;
    HeadMove move = HeadMove::S;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Deterministic single-tape machine on cells 0..tape_bound. `halt` is q_h;
/// `accept`, when present, is a second final state (used by machines fed to
/// wrap_machine, where `halt` plays the rejecting state).
struct TMSpec {
    std::vector<std::string> states;
    std::uint32_t initial = 0;
    std::uint32_t halt = 0;
    std::optional<std::uint32_t> accept;
    std::uint32_t tape_bound = 0;              // t': highest cell index
    std::vector<std::optional<Transition>> delta;  // [state * 3 + symbol]

    TMSpec() = default;
    TMSpec(std::vector<std::string> state_names, std::uint32_t initial, std::uint32_t halt, std::uint32_t tape_bound,
           std::optional<std::uint32_t> accept = std::nullopt);

    std::size_t num_states() const noexcept { return states.size(); }
    bool is_final(std::uint32_t q) const noexcept { return q == halt || (accept && q == *accept); }
    const std::optional<Transition>& transition(std::uint32_t q, Symbol s) const {
        return delta.at(q * kAlphabetSize + static_cast<std::uint32_t>(s));
    }
    void set(std::uint32_t q, Symbol s, Transition t) { delta.at(q * kAlphabetSize + static_cast<std::uint32_t>(s)) = t; }
    std::optional<std::uint32_t> find_state(const std::string& name) const;

    /// delta total on non-final states, undefined on final ones, indices in range.
    void validate() const;

    friend bool operator==(const TMSpec&, const TMSpec&) = default;
};

struct TapeConfig {
    std::uint32_t state = 0;
    std::uint32_t head = 0;
    std::vector<Symbol> tape;  // cells 0..t'

    friend bool operator==(const TapeConfig&, const TapeConfig&) = default;
    friend auto operator<=>(const TapeConfig&, const TapeConfig&) = default;
};

struct TapeConfigHash {
    std::size_t operator()(const TapeConfig& c) const noexcept;
};

std::string to_string(const TMSpec& spec, const TapeConfig& c);

/// Empty tape, head 0, initial state.
TapeConfig initial_config(const TMSpec& spec);

/// One application of delta. PreconditionError on a final state,
/// BoundViolation if the head would leave the tape.
TapeConfig tm_step(const TMSpec& spec, const TapeConfig& config);

struct RunOutcome {
    enum class Kind { Halts, Loops };
    Kind kind = Kind::Halts;
    std::uint64_t steps = 0;  // Halts: steps taken to reach a final state
    std::uint64_t prefix = 0; // Loops: index of the first repeated configuration
    std::uint64_t period = 0; // Loops: cycle length
    TapeConfig final_config;  // Halts: the final configuration

    bool halts() const noexcept { return kind == Kind::Halts; }
};

inline constexpr std::uint64_t kDefaultRunCap = 5'000'000;

/// Exact outcome by visited-configuration cycle detection. Throws
/// CapExceeded after `cap` distinct configurations.
RunOutcome run_bounded(const TMSpec& spec, const TapeConfig& start, std::uint64_t cap = kDefaultRunCap);

/// Counter width used by wrap_machine for a machine with `states` states on t+1 cells.
std::uint32_t counter_width(std::size_t states, std::uint32_t t);

/// M' for (M, x, t). M runs on cells 0..t; a binary counter sits on cells
/// t+1..t+w with its low bit at t+1. M' halts iff M rejects x (enters
/// M.halt); acceptance, leaving cells 0..t, or counter overflow erase the
/// tape and restart from the initial configuration.
TMSpec wrap_machine(const TMSpec& M, const std::vector<Symbol>& x, std::uint32_t t, std::uint32_t max_tape = 64);

/// Desk machines used by tests, examples and the acceptance suite.
namespace desk {
/// One state plus q_h; cycles the head cell b -> 1 -> 0 -> b without moving.
TMSpec looper(std::uint32_t tape_bound = 2);
/// Writes 1 on blank and halts moving right.
TMSpec halter(std::uint32_t tape_bound = 2);
/// Walks right writing 1s, then left writing 0s, forever.
TMSpec bouncer(std::uint32_t tape_bound = 2);
}  // namespace desk

}  // namespace sinkeq
