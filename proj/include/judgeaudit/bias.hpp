#pragma once

#include <string>
#include <vector>

#include "judgeaudit/types.hpp"

namespace judgeaudit {

// Injectable meta-note text for one condition. The preamble is the whole
// judge-role paragraph (role sentence + per-assistant notes); note_a/note_b
// are the per-assistant fragments for inline placement. Both representations
// are stored whole and cross-checked against each other in tests.
struct MetaNotes {
    std::string preamble;
    std::string note_a;
    std::string note_b;
};

// One judging condition. The cue always describes assistant A favorably;
// no code path attaches bias text to B.
struct BiasSpec {
    BiasKind kind = BiasKind::NoBias;
    MetaNotes notes;
    Side target = Side::A;
    // Position carries no text; it is realized by running both presentations.
    bool realized_by_presentation = false;

    bool has_injectable_text() const { return !notes.note_a.empty(); }
};

inline constexpr const char* kBiasCatalogVersion = "bias-catalog-v1";

// The impartial-judge role sentence, also the NoBias preamble.
const std::string& impartial_preamble();

// All thirteen conditions in catalog order: NoBias first, the eleven
// text-injectable cues next, Position last as a text-less pseudo-condition
// kept in the catalog so reporting stays uniform across conditions.
const std::vector<BiasSpec>& bias_catalog();

const BiasSpec& bias_spec(BiasKind kind);

// Byte-exact notes for an injectable condition. Position has none and errors.
const MetaNotes& meta_notes(BiasKind kind);

} // namespace judgeaudit
