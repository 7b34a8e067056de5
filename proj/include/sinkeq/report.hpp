#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinkeq/io.hpp"

namespace sinkeq {

/// Result of one CLI question. `details` holds question-specific facts
/// (sink lists, flags, counterexamples); both renderings show all of it.
struct AnalysisReport {
    enum class Answer { True, False, Inconclusive };

    std::string question;
    Answer answer = Answer::False;
    std::string reason;
    std::optional<std::uint64_t> cap;  // set whenever the answer is inconclusive
    std::uint64_t states = 0;
    std::uint64_t edges = 0;
    std::uint64_t components = 0;
    double wall_ms = 0;
    std::vector<std::string> trace;
    io::Json details = io::Json::object();

    static AnalysisReport inconclusive(std::string question, std::uint64_t cap, std::string reason);
};

std::string_view to_string(AnalysisReport::Answer a);

io::Json report_to_json(const AnalysisReport& r);
std::string render_json(const AnalysisReport& r);
std::string render_text(const AnalysisReport& r);

}  // namespace sinkeq
