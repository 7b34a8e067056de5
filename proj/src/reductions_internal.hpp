#pragma once

// Shared between the reduction translation units; not installed.

#include <array>
#include <string>
#include <vector>

#include "sinkeq/reductions.hpp"

namespace sinkeq::detail {

inline constexpr std::array<Symbol, 3> kSymbols{Symbol::Zero, Symbol::One, Symbol::Blank};

inline std::string sym_name(std::uint32_t s) { return std::string(1, to_char(static_cast<Symbol>(s))); }

/// Index of a W/V control: new state q', new head i', current head i, new symbol s'.
struct ControlKey {
    std::uint32_t q;
    std::uint32_t i2;
    std::uint32_t i;
    std::uint32_t s;
    friend bool operator==(const ControlKey&, const ControlKey&) = default;
};

std::vector<ControlKey> control_keys(const TMSpec& spec);
std::string key_name(const TMSpec& spec, const ControlKey& k);

/// Player layout shared by the weighted, player-specific and market compiles.
struct TmLayout {
    PlayerId state = 0;
    PlayerId position = 1;
    PlayerId first_cell = 2;
    PlayerId first_w = 0;
    PlayerId first_v = 0;
    PlayerId control_d = 0;
    PlayerId transition = 0;
    PlayerId clock = 0;
    std::size_t controls = 0;

    explicit TmLayout(const TMSpec& spec);
    PlayerId cell(std::uint32_t i) const { return first_cell + i; }
};

StrategyProfile encode_tm(const CompiledReduction& c, const TapeConfig& config);
TapeConfig decode_tm(const CompiledReduction& c, const StrategyProfile& p);
bool round_start_tm(const CompiledReduction& c, const StrategyProfile& p);

StrategyProfile encode_anon(const CompiledReduction& c, const TapeConfig& config);
TapeConfig decode_anon(const CompiledReduction& c, const StrategyProfile& p);
bool round_start_anon(const CompiledReduction& c, const StrategyProfile& p);

}  // namespace sinkeq::detail
