#include "judgeaudit/sim_judge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>

#include "judgeaudit/bias.hpp"
#include "judgeaudit/hash.hpp"

namespace judgeaudit {

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

const char* kRamblingFragments[] = {
    "the loop bounds still look suspicious, so let me re-derive them from the examples,",
    "although the second branch might handle the empty input, I should re-check the cast,",
    "wait, the accumulator overflows for large n, which changes the complexity argument,",
    "rewriting the recurrence once more gives a slightly different base case,",
    "the helper function shadows the outer variable, so tracing the state again,",
    "actually the sort order matters here, let me reconsider the comparator,",
    "on second thought the off-by-one sits in the upper bound, not the lower,",
    "the test harness would catch this, but reasoning further about the edge case,",
};

std::string rambling_text(SplitMix64& stream) {
    std::string out = "Okay, let me work through the problem from the beginning.";
    const size_t fragment_count = 28 + stream.next() % 12;
    for (size_t i = 0; i < fragment_count; ++i) {
        out += ' ';
        out += kRamblingFragments[stream.next() % std::size(kRamblingFragments)];
    }
    return out;
}

std::vector<TokenProb> tokenize_with_probs(const std::string& text, Side verdict,
                                           double letter_probability) {
    const std::string letter(to_label(verdict));
    std::vector<TokenProb> tokens;
    size_t i = 0;
    bool letter_assigned = false;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        TokenProb token;
        token.token = text.substr(start, i - start);
        if (!letter_assigned && token.token == letter) {
            token.probability = letter_probability;
            letter_assigned = true;
        } else {
            token.probability = 1.0;
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

} // namespace

double SimProfile::shift_for(BiasKind bias) const {
    auto it = susceptibility.find(bias);
    return it == susceptibility.end() ? 0.0 : it->second;
}

double SimProfile::a_pick_probability(BiasKind bias) const {
    return std::clamp(base_pref_a + shift_for(bias), 0.0, 1.0);
}

void SimProfile::validate() const {
    if (!in_unit(skill)) throw Error(ErrorKind::Config, "sim profile: skill must be in [0,1]");
    if (!in_unit(base_pref_a)) {
        throw Error(ErrorKind::Config, "sim profile: base_pref_a must be in [0,1]");
    }
    if (!std::isfinite(nonanswer_rate) || nonanswer_rate < 0.0 || nonanswer_rate >= 1.0) {
        throw Error(ErrorKind::Config, "sim profile: nonanswer_rate must be in [0,1)");
    }
    for (const auto& [bias, shift] : susceptibility) {
        if (!std::isfinite(shift) || shift < -1.0 || shift > 1.0) {
            throw Error(ErrorKind::Config,
                        std::string("sim profile: susceptibility for ") +
                            std::string(to_label(bias)) + " must be in [-1,1]");
        }
    }
}

double expected_accuracy(const SimProfile& profile, BiasKind bias, Side gold) {
    const double pi = profile.a_pick_probability(bias);
    const double pick_gold = gold == Side::A ? pi : 1.0 - pi;
    return profile.skill + (1.0 - profile.skill) * pick_gold;
}

double verdict_probability(const SimProfile& profile, BiasKind bias, Side gold,
                           Side verdict) {
    const double acc = expected_accuracy(profile, bias, gold);
    return verdict == gold ? acc : 1.0 - acc;
}

SimJudge::SimJudge(SimProfile profile, uint64_t master_seed)
    : profile_(std::move(profile)), master_seed_(master_seed) {
    profile_.validate();
    id_ = "sim:" + profile_.name + ":" + std::to_string(master_seed_);
}

JudgeResponse SimJudge::query(const JudgePrompt& prompt, const DecodingParams&,
                              const CallKey& call_key) {
    (void)prompt; // behavior is a property of the profile, not of the text

    SplitMix64 stream(master_seed_ ^ fnv1a64(call_key.canonical()));

    JudgeResponse response;
    response.backend_id = id_;
    response.latency_ms = 0;

    if (stream.bernoulli(profile_.nonanswer_rate)) {
        response.raw_text = rambling_text(stream);
        response.truncated = true;
        return response;
    }

    const BiasKind bias = call_key.condition.bias;
    Side verdict;
    if (stream.bernoulli(profile_.skill)) {
        if (!call_key.gold_position) {
            throw Error(ErrorKind::Backend,
                        "sim judge with skill > 0 requires the gold position side "
                        "channel in the call key");
        }
        verdict = *call_key.gold_position;
    } else {
        verdict = stream.bernoulli(profile_.a_pick_probability(bias)) ? Side::A : Side::B;
    }

    response.raw_text =
        "I compared both answers against my own solution before deciding.\n" +
        canonical_verdict_text(verdict);
    response.truncated = false;

    if (profile_.emit_token_confidences) {
        double letter_probability = 1.0;
        if (call_key.gold_position) {
            letter_probability =
                verdict_probability(profile_, bias, *call_key.gold_position, verdict);
        } else {
            const double pi = profile_.a_pick_probability(bias);
            letter_probability = verdict == Side::A ? pi : 1.0 - pi;
        }
        response.token_confidences =
            tokenize_with_probs(response.raw_text, verdict, letter_probability);
    }
    return response;
}

std::unique_ptr<SimJudge> make_sim_judge(SimProfile profile, uint64_t master_seed) {
    return std::make_unique<SimJudge>(std::move(profile), master_seed);
}

SimProfile named_profile(const std::string& name) {
    SimProfile profile;
    profile.name = name;
    if (name == "oracle") {
        profile.skill = 1.0;
    } else if (name == "positional") {
        profile.skill = 0.0;
        profile.base_pref_a = 1.0;
    } else if (name == "coin") {
        profile.skill = 0.0;
        profile.base_pref_a = 0.5;
    } else if (name == "cue") {
        profile.skill = 0.3;
        profile.base_pref_a = 0.5;
        for (const BiasSpec& spec : bias_catalog()) {
            if (spec.has_injectable_text()) profile.susceptibility[spec.kind] = 0.4;
        }
    } else if (name == "mute") {
        profile.skill = 0.0;
        profile.base_pref_a = 0.5;
        profile.nonanswer_rate = 0.56;
    } else {
        throw Error(ErrorKind::Config, "unknown sim profile '" + name + "'");
    }
    return profile;
}

std::vector<std::string> named_profile_names() {
    return {"oracle", "positional", "coin", "cue", "mute"};
}

} // namespace judgeaudit
