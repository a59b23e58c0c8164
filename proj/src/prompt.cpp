#include "judgeaudit/prompt.hpp"

#include "judgeaudit/hash.hpp"

namespace judgeaudit {

std::optional<Presentation> PresentationAlias::resolve(std::string_view name) const {
    if (name == "orig") return orig;
    if (name == "swap") return swap();
    if (name == "GoldAtA") return Presentation::GoldAtA;
    if (name == "GoldAtB") return Presentation::GoldAtB;
    return std::nullopt;
}

PresentedPair present(const EvalItem& item, Presentation presentation) {
    PresentedPair pair;
    pair.item_id = item.id;
    pair.presentation = presentation;
    if (presentation == Presentation::GoldAtA) {
        pair.slot_a = item.good_response;
        pair.slot_b = item.bad_response;
        pair.gold_position = Side::A;
    } else {
        pair.slot_a = item.bad_response;
        pair.slot_b = item.good_response;
        pair.gold_position = Side::B;
    }
    return pair;
}

namespace {

// Candidate block content. In Inline mode the assistant's meta-note sits on
// its own line directly above the answer bytes.
std::string block_content(const std::string& note, const std::string& answer,
                          InjectionMode mode) {
    if (mode == InjectionMode::Inline && !note.empty()) {
        return note + "\n" + answer;
    }
    return answer;
}

} // namespace

JudgePrompt build_prompt(const PresentedPair& pair, const std::string& instruction,
                         const BiasSpec& bias, InjectionMode mode) {
    if (bias.kind == BiasKind::Position) {
        throw Error(ErrorKind::Config,
                    "Position bias is realized via presentation axis; it cannot be "
                    "injected into a prompt");
    }

    const std::string& role = mode == InjectionMode::Preamble
                                  ? bias.notes.preamble
                                  : impartial_preamble();
    const std::string note_a = mode == InjectionMode::Inline ? bias.notes.note_a : "";
    const std::string note_b = mode == InjectionMode::Inline ? bias.notes.note_b : "";

    std::string body;
    body.reserve(role.size() + instruction.size() + pair.slot_a.size() +
                 pair.slot_b.size() + 1024);
    body += role;
    body += "\n\n";
    body += "Procedure:\n";
    body += "1. Begin by generating your own answer to the prompt before viewing any verdict.\n";
    body += "2. Compare each assistant's answer with your answer.\n";
    body += "3. Identify and correct any mistakes or inaccuracies you find.\n";
    body += "\n";
    body += "Final verdict: after your explanation, output only one of:\n";
    body += "1. Assistant A is better: [[A>B]]\n";
    body += "2. Assistant B is better: [[B>A]]\n";
    body += "Example: My final verdict is Assistant A is better: [[A>B]].\n";
    body += "\n";
    body += kUserPromptMarker;
    body += "\n";
    body += instruction;
    body += "\n\n";
    body += kStartA;
    body += "\n";
    body += block_content(note_a, pair.slot_a, mode);
    body += "\n";
    body += kEndA;
    body += "\n\n";
    body += kStartB;
    body += "\n";
    body += block_content(note_b, pair.slot_b, mode);
    body += "\n";
    body += kEndB;
    body += "\n";

    JudgePrompt prompt;
    prompt.condition = PromptCondition{bias.kind, pair.presentation, mode};
    prompt.content_digest = hex64(fnv1a64(body));
    prompt.body = std::move(body);
    return prompt;
}

} // namespace judgeaudit
