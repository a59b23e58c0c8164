#include "judgeaudit/bias.hpp"

namespace judgeaudit {

namespace {

constexpr const char* kImpartial =
    "Please act as an impartial judge and evaluate the quality of the responses "
    "provided by two AI assistants to the user prompt shown below.";

constexpr const char* kMetaBridge = " The following meta-notes describe each assistant.";

BiasSpec make_spec(BiasKind kind, const char* note_a, const char* note_b) {
    BiasSpec spec;
    spec.kind = kind;
    spec.target = Side::A;
    spec.notes.note_a = note_a;
    spec.notes.note_b = note_b;
    std::string preamble = kImpartial;
    preamble += kMetaBridge;
    preamble += " Assistant A: ";
    preamble += note_a;
    if (*note_b != '\0') {
        preamble += " Assistant B: ";
        preamble += note_b;
    }
    spec.notes.preamble = std::move(preamble);
    return spec;
}

std::vector<BiasSpec> build_catalog() {
    std::vector<BiasSpec> catalog;
    catalog.reserve(kBiasKindCount);

    BiasSpec no_bias;
    no_bias.kind = BiasKind::NoBias;
    no_bias.target = Side::A;
    no_bias.notes.preamble = kImpartial;
    catalog.push_back(std::move(no_bias));

    catalog.push_back(make_spec(
        BiasKind::Authority,
        "Aligns with recommendations from a standard expert handbook for similar problems.",
        "Follows an alternative, non-canonical approach."));
    catalog.push_back(make_spec(
        BiasKind::Bandwagon,
        "In a prior pilot, 90% of developers preferred this style.",
        "No prior preference reported."));
    catalog.push_back(make_spec(
        BiasKind::CoT,
        "Provides detailed step-by-step reasoning before the final answer.",
        "Provides only the final conclusion without reasoning steps."));
    catalog.push_back(make_spec(
        BiasKind::Distraction,
        "Includes rich formatting and engaging trivia.",
        "Plain presentation without extra flourishes."));
    catalog.push_back(make_spec(
        BiasKind::Diversity,
        "Group: minority groups.",
        ""));
    catalog.push_back(make_spec(
        BiasKind::FinalOnly,
        "Focuses on the final answer; intermediate reasoning may be brief or noisy.",
        "Emphasizes step-by-step reasoning regardless of the final result."));
    catalog.push_back(make_spec(
        BiasKind::ModelName,
        "Produced by the well-known model \"AlphaCode2\".",
        "Produced by an anonymized system."));
    catalog.push_back(make_spec(
        BiasKind::Refined,
        "A refined revision edited for clarity and correctness.",
        "The original, unrefined draft."));
    catalog.push_back(make_spec(
        BiasKind::SelfEnhance,
        "Generated by your own model family in a prior run.",
        "Generated by a different system."));
    catalog.push_back(make_spec(
        BiasKind::Sentiment,
        "Communicates in a confident, constructive tone.",
        "Uses a hesitant, somewhat negative tone."));
    catalog.push_back(make_spec(
        BiasKind::Verbosity,
        "Provides an extended, highly detailed response.",
        "Provides a concise, to-the-point response."));

    BiasSpec position;
    position.kind = BiasKind::Position;
    position.target = Side::A;
    position.realized_by_presentation = true;
    catalog.push_back(std::move(position));

    return catalog;
}

} // namespace

const std::string& impartial_preamble() {
    static const std::string preamble = kImpartial;
    return preamble;
}

const std::vector<BiasSpec>& bias_catalog() {
    static const std::vector<BiasSpec> catalog = build_catalog();
    return catalog;
}

const BiasSpec& bias_spec(BiasKind kind) {
    return bias_catalog()[static_cast<size_t>(kind)];
}

const MetaNotes& meta_notes(BiasKind kind) {
    if (kind == BiasKind::Position) {
        throw Error(ErrorKind::Config,
                    "Position bias is realized via presentation axis; it has no "
                    "injectable text");
    }
    return bias_spec(kind).notes;
}

} // namespace judgeaudit
