#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "judgeaudit/types.hpp"

namespace judgeaudit {

enum class NonJudgmentReason : uint8_t { NoMarker, TieMarker, Truncated };

std::string_view to_label(NonJudgmentReason reason);
std::optional<NonJudgmentReason> parse_non_judgment_reason(std::string_view text);

// Outcome of scanning one raw judge output. Accuracy code paths only ever
// consume Answered outcomes; non-judgments are missing data, never verdicts.
class ParseOutcome {
public:
    static ParseOutcome make_answered(Side verdict, size_t marker_offset) {
        ParseOutcome out;
        out.answered_ = true;
        out.verdict_ = verdict;
        out.marker_offset_ = marker_offset;
        return out;
    }
    static ParseOutcome make_non_judgment(NonJudgmentReason reason) {
        ParseOutcome out;
        out.answered_ = false;
        out.reason_ = reason;
        return out;
    }

    bool answered() const { return answered_; }
    Side verdict() const;
    size_t marker_offset() const;
    NonJudgmentReason reason() const;

    bool operator==(const ParseOutcome& other) const = default;

private:
    bool answered_ = false;
    Side verdict_ = Side::A;
    size_t marker_offset_ = 0;
    NonJudgmentReason reason_ = NonJudgmentReason::NoMarker;
};

// Scans for the bracketed verdict markers [[A>B]], [[B>A]] and the strength
// variants [[A>>B]], [[B>>A]] (same winner). The last marker in the text
// wins. Tie markers [[A=B]] / [[B=A]] classify as non-judgments, as does a
// marker-free text (Truncated when the truncated flag is set).
ParseOutcome parse_verdict(const std::string& raw_text, bool truncated);

// Canonical verdict sentence in the judge output format; round-trips through
// parse_verdict.
std::string canonical_verdict_text(Side verdict);

struct TokenProb {
    std::string token;
    double probability = 0.0;
};

struct DecisionConfidence {
    std::optional<double> value;
    bool alignment_failed = false;
};

// Probability of the first token that commits the verdict: the bare choice
// letter inside the line that carries the final marker, located by aligning
// the token stream against raw_text. Empty token stream yields no value; a
// stream that cannot be aligned sets the diagnostic flag.
DecisionConfidence decision_confidence(const std::string& raw_text,
                                       const std::vector<TokenProb>& tokens,
                                       const ParseOutcome& outcome);

} // namespace judgeaudit
