#include "judgeaudit/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace judgeaudit {

namespace {

// Row labels match the reporting convention used throughout the tables.
constexpr std::array<std::string_view, kBiasKindCount> kBiasLabels = {
    "no-bias",      "Authority", "Bandwagon", "CoT",     "Distraction",
    "Diversity",    "Final-only", "Model-name", "Refined", "Self-enhance",
    "Sentiment",    "Verbosity", "Position",
};

std::string fold(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

std::string_view to_label(TaskKind task) {
    switch (task) {
        case TaskKind::CodeGen: return "CodeGen";
        case TaskKind::CodeRepair: return "CodeRepair";
        case TaskKind::TestGen: return "TestGen";
    }
    return "?";
}

std::string_view to_label(Difficulty difficulty) {
    switch (difficulty) {
        case Difficulty::Easy: return "Easy";
        case Difficulty::Medium: return "Medium";
        case Difficulty::Hard: return "Hard";
    }
    return "?";
}

std::string_view to_label(Side side) {
    return side == Side::A ? "A" : "B";
}

std::string_view to_label(BiasKind bias) {
    return kBiasLabels[static_cast<size_t>(bias)];
}

std::string_view to_label(Presentation presentation) {
    return presentation == Presentation::GoldAtA ? "GoldAtA" : "GoldAtB";
}

std::string_view to_label(InjectionMode mode) {
    return mode == InjectionMode::Preamble ? "Preamble" : "Inline";
}

std::optional<TaskKind> parse_task(std::string_view text) {
    if (text == "CodeGen") return TaskKind::CodeGen;
    if (text == "CodeRepair") return TaskKind::CodeRepair;
    if (text == "TestGen") return TaskKind::TestGen;
    return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(std::string_view text) {
    if (text == "Easy") return Difficulty::Easy;
    if (text == "Medium") return Difficulty::Medium;
    if (text == "Hard") return Difficulty::Hard;
    return std::nullopt;
}

std::optional<Side> parse_side(std::string_view text) {
    if (text == "A") return Side::A;
    if (text == "B") return Side::B;
    return std::nullopt;
}

std::optional<BiasKind> parse_bias(std::string_view text) {
    const std::string key = fold(text);
    for (int i = 0; i < kBiasKindCount; ++i) {
        if (key == fold(kBiasLabels[static_cast<size_t>(i)])) {
            return static_cast<BiasKind>(i);
        }
    }
    return std::nullopt;
}

std::optional<InjectionMode> parse_injection_mode(std::string_view text) {
    const std::string key = fold(text);
    if (key == "preamble") return InjectionMode::Preamble;
    if (key == "inline") return InjectionMode::Inline;
    return std::nullopt;
}

} // namespace judgeaudit
