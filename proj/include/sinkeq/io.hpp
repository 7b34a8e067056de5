#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sinkeq/game.hpp"
#include "sinkeq/machine.hpp"
#include "sinkeq/reductions.hpp"

namespace sinkeq::io {

using Json = nlohmann::ordered_json;

/// Game documents: {"class": ..., class-specific body}.
Json game_to_json(const Game& game);
GamePtr game_from_json(const Json& doc);
std::string serialize_game(const Game& game);
GamePtr parse_game(std::string_view text);

/// {"states", "initial", "halt", "accept"?, "tape_bound", "delta": [{state, read, next_state, write, move}]}
Json tm_to_json(const TMSpec& spec);
TMSpec tm_from_json(const Json& doc);
TMSpec parse_tm(std::string_view text);

Json formula_to_json(const CnfFormula& formula);
CnfFormula formula_from_json(const Json& doc);

/// DIMACS cnf; every clause must have exactly three literals.
CnfFormula parse_dimacs(std::string_view text);

/// Symbol table stored next to a compiled game.
Json sidecar_to_json(const CompiledReduction& compiled);
CompiledReduction compiled_from_json(GamePtr game, const Json& sidecar);

std::filesystem::path sidecar_path(const std::filesystem::path& game_path);
/// Writes the game to `path` and the symbol table to sidecar_path(path).
void save_compiled(const std::filesystem::path& path, const CompiledReduction& compiled);
CompiledReduction load_compiled(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);
GamePtr load_game(const std::filesystem::path& path);

}  // namespace sinkeq::io
