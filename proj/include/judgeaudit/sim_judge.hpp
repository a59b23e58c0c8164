#pragma once

#include <map>
#include <memory>
#include <string>

#include "judgeaudit/judge.hpp"

namespace judgeaudit {

// Behavioral model of a judge with closed-form expected accuracy.
//
//   skill            probability of picking the gold candidate outright
//   base_pref_a      A-pick probability when the choice is not skill-driven
//   susceptibility   additive shift on the A-pick probability per condition
//   nonanswer_rate   probability of emitting a truncated rambling instead of
//                    a verdict
//
// Effective A-pick probability under condition b is
// clamp(base_pref_a + susceptibility[b], 0, 1).
struct SimProfile {
    std::string name = "custom";
    double skill = 0.0;
    double base_pref_a = 0.5;
    std::map<BiasKind, double> susceptibility;
    double nonanswer_rate = 0.0;
    bool emit_token_confidences = true;

    double shift_for(BiasKind bias) const;
    double a_pick_probability(BiasKind bias) const; // clamped
    void validate() const;
};

// Closed-form per-call accuracy, conditioned on answering:
//   gold at A: skill + (1 - skill) * pi_b
//   gold at B: skill + (1 - skill) * (1 - pi_b)
double expected_accuracy(const SimProfile& profile, BiasKind bias, Side gold);

// Probability that one answered call emits the given verdict letter.
double verdict_probability(const SimProfile& profile, BiasKind bias, Side gold,
                           Side verdict);

// Seeded simulated judge. All randomness derives from (master_seed, call_key),
// so identical keys give byte-identical responses regardless of scheduling,
// and repeated run indices get independent streams. Emits verdicts in the
// standard output format so the real parser path is always exercised.
class SimJudge final : public JudgeBackend {
public:
    SimJudge(SimProfile profile, uint64_t master_seed);

    JudgeResponse query(const JudgePrompt& prompt, const DecodingParams& params,
                        const CallKey& call_key) override;
    std::string id() const override { return id_; }
    bool wants_gold_position() const override { return true; }

    const SimProfile& profile() const { return profile_; }
    uint64_t master_seed() const { return master_seed_; }

private:
    SimProfile profile_;
    uint64_t master_seed_;
    std::string id_;
};

std::unique_ptr<SimJudge> make_sim_judge(SimProfile profile, uint64_t master_seed);

// Built-in profiles used by the simulate command and the self-test suite:
//   oracle      always picks gold
//   positional  always picks A
//   coin        fair coin, no skill
//   cue         skill 0.3, base 0.5, +0.4 shift under every injectable cue
//   mute        fair coin that emits no verdict 56% of the time
SimProfile named_profile(const std::string& name);
std::vector<std::string> named_profile_names();

} // namespace judgeaudit
