#include "judgeaudit/parse.hpp"

namespace judgeaudit {

std::string_view to_label(NonJudgmentReason reason) {
    switch (reason) {
        case NonJudgmentReason::NoMarker: return "NoMarker";
        case NonJudgmentReason::TieMarker: return "TieMarker";
        case NonJudgmentReason::Truncated: return "Truncated";
    }
    return "?";
}

std::optional<NonJudgmentReason> parse_non_judgment_reason(std::string_view text) {
    if (text == "NoMarker") return NonJudgmentReason::NoMarker;
    if (text == "TieMarker") return NonJudgmentReason::TieMarker;
    if (text == "Truncated") return NonJudgmentReason::Truncated;
    return std::nullopt;
}

Side ParseOutcome::verdict() const {
    if (!answered_) throw Error(ErrorKind::Metrics, "verdict() on a non-judgment");
    return verdict_;
}

size_t ParseOutcome::marker_offset() const {
    if (!answered_) throw Error(ErrorKind::Metrics, "marker_offset() on a non-judgment");
    return marker_offset_;
}

NonJudgmentReason ParseOutcome::reason() const {
    if (answered_) throw Error(ErrorKind::Metrics, "reason() on an answered outcome");
    return reason_;
}

namespace {

struct Marker {
    const char* text;
    bool tie;
    Side winner; // meaningless when tie
};

constexpr Marker kMarkers[] = {
    {"[[A>B]]", false, Side::A},  {"[[B>A]]", false, Side::B},
    {"[[A>>B]]", false, Side::A}, {"[[B>>A]]", false, Side::B},
    {"[[A=B]]", true, Side::A},   {"[[B=A]]", true, Side::A},
};

} // namespace

ParseOutcome parse_verdict(const std::string& raw_text, bool truncated) {
    bool found = false;
    bool tie = false;
    Side winner = Side::A;
    size_t best_offset = 0;

    for (const Marker& marker : kMarkers) {
        size_t pos = raw_text.find(marker.text);
        while (pos != std::string::npos) {
            if (!found || pos > best_offset) {
                found = true;
                best_offset = pos;
                tie = marker.tie;
                winner = marker.winner;
            }
            pos = raw_text.find(marker.text, pos + 1);
        }
    }

    if (!found) {
        return ParseOutcome::make_non_judgment(truncated ? NonJudgmentReason::Truncated
                                                         : NonJudgmentReason::NoMarker);
    }
    if (tie) return ParseOutcome::make_non_judgment(NonJudgmentReason::TieMarker);
    return ParseOutcome::make_answered(winner, best_offset);
}

std::string canonical_verdict_text(Side verdict) {
    if (verdict == Side::A) {
        return "My final verdict is Assistant A is better: [[A>B]]";
    }
    return "My final verdict is Assistant B is better: [[B>A]]";
}

DecisionConfidence decision_confidence(const std::string& raw_text,
                                       const std::vector<TokenProb>& tokens,
                                       const ParseOutcome& outcome) {
    DecisionConfidence result;
    if (!outcome.answered() || tokens.empty()) return result;

    // Committing region: the line that carries the winning marker.
    const size_t marker = outcome.marker_offset();
    size_t line_start = raw_text.rfind('\n', marker);
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    size_t line_end = raw_text.find('\n', marker);
    if (line_end == std::string::npos) line_end = raw_text.size();

    // Align tokens against raw_text in generation order.
    const std::string letter(to_label(outcome.verdict()));
    size_t pos = 0;
    std::optional<double> letter_prob;
    std::optional<double> marker_token_prob;
    for (const TokenProb& token : tokens) {
        if (token.token.empty()) continue;
        const size_t off = raw_text.find(token.token, pos);
        if (off == std::string::npos) {
            result.alignment_failed = true;
            return result;
        }
        pos = off + token.token.size();
        if (off < line_start || off >= line_end) continue;
        if (!letter_prob && token.token == letter) {
            letter_prob = token.probability;
        }
        // Fallback for tokenizations that never emit the bare letter: the
        // token carrying the marker itself is the committing token.
        if (!marker_token_prob && off <= marker && marker < pos &&
            token.token.find("[[") != std::string::npos) {
            marker_token_prob = token.probability;
        }
    }

    if (letter_prob) {
        result.value = letter_prob;
    } else if (marker_token_prob) {
        result.value = marker_token_prob;
    } else {
        result.alignment_failed = true;
    }
    return result;
}

} // namespace judgeaudit
