#include "sinkeq/report.hpp"

#include <algorithm>
#include <cstdio>

namespace sinkeq {

AnalysisReport AnalysisReport::inconclusive(std::string question, std::uint64_t cap, std::string reason) {
    AnalysisReport r;
    r.question = std::move(question);
    r.answer = Answer::Inconclusive;
    r.cap = cap;
    r.reason = std::move(reason);
    return r;
}

std::string_view to_string(AnalysisReport::Answer a) {
    switch (a) {
        case AnalysisReport::Answer::True: return "true";
        case AnalysisReport::Answer::False: return "false";
        case AnalysisReport::Answer::Inconclusive: return "inconclusive";
    }
    return "?";
}

io::Json report_to_json(const AnalysisReport& r) {
    io::Json j;
    j["question"] = r.question;
    io::Json answer;
    answer["value"] = std::string(to_string(r.answer));
    if (!r.reason.empty()) answer["reason"] = r.reason;
    if (r.cap) answer["cap"] = *r.cap;
    j["answer"] = std::move(answer);
    j["stats"] = io::Json{{"states", r.states}, {"edges", r.edges}, {"components", r.components}, {"wall_ms", r.wall_ms}};
    if (!r.details.empty()) j["details"] = r.details;
    if (!r.trace.empty()) j["trace"] = r.trace;
    return j;
}

std::string render_json(const AnalysisReport& r) { return report_to_json(r).dump(2) + "\n"; }

namespace {
// One "key: value" line per scalar leaf; nested keys joined with dots.
void flatten(const io::Json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const io::Json& x) { return x.is_structured(); })) {
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", out);
    } else {
        out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}
}  // namespace

std::string render_text(const AnalysisReport& r) {
    std::string out;
    out += "question: " + r.question + "\n";
    out += "answer: " + std::string(to_string(r.answer)) + "\n";
    if (!r.reason.empty()) out += "reason: " + r.reason + "\n";
    if (r.cap) out += "cap: " + std::to_string(*r.cap) + "\n";
    char ms[64];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out += "states: " + std::to_string(r.states) + "\nedges: " + std::to_string(r.edges) +
           "\ncomponents: " + std::to_string(r.components) + "\nwall_ms: " + ms + "\n";
    flatten(r.details, "", out);
    if (!r.trace.empty()) {
        out += "trace:\n";
        for (const auto& line : r.trace) out += "  " + line + "\n";
    }
    return out;
}

}  // namespace sinkeq
