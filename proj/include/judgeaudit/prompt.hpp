#pragma once

#include <optional>
#include <string>

#include "judgeaudit/bias.hpp"
#include "judgeaudit/corpus.hpp"
#include "judgeaudit/types.hpp"

namespace judgeaudit {

// Maps the orig/swap naming onto concrete gold placements. Fixed per run and
// recorded in run metadata.
struct PresentationAlias {
    Presentation orig = Presentation::GoldAtA;

    Presentation swap() const {
        return orig == Presentation::GoldAtA ? Presentation::GoldAtB
                                             : Presentation::GoldAtA;
    }
    std::string_view alias_of(Presentation p) const {
        return p == orig ? "orig" : "swap";
    }
    std::optional<Presentation> resolve(std::string_view name) const;
};

// A concrete A/B placement of one item. Contents are copied verbatim; the
// harness never normalizes candidate bytes.
struct PresentedPair {
    std::string item_id;
    Presentation presentation = Presentation::GoldAtA;
    std::string slot_a;
    std::string slot_b;
    Side gold_position = Side::A;
};

PresentedPair present(const EvalItem& item, Presentation presentation);

struct PromptCondition {
    BiasKind bias = BiasKind::NoBias;
    Presentation presentation = Presentation::GoldAtA;
    InjectionMode injection_mode = InjectionMode::Preamble;
};

struct JudgePrompt {
    std::string body;
    PromptCondition condition;
    std::string content_digest; // stable hash of body
};

inline constexpr const char* kStartA = "<|The Start of Assistant A's Answer|>";
inline constexpr const char* kEndA = "<|The End of Assistant A's Answer|>";
inline constexpr const char* kStartB = "<|The Start of Assistant B's Answer|>";
inline constexpr const char* kEndB = "<|The End of Assistant B's Answer|>";
inline constexpr const char* kUserPromptMarker = "<|User Prompt|>";

// Deterministic prompt assembly. Preamble mode puts the condition's whole
// role paragraph up front; Inline mode keeps the impartial role paragraph and
// prepends note_a/note_b inside the candidate delimiter blocks. Position is
// not an injectable condition and errors.
JudgePrompt build_prompt(const PresentedPair& pair, const std::string& instruction,
                         const BiasSpec& bias, InjectionMode mode);

} // namespace judgeaudit
