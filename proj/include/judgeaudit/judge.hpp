#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "judgeaudit/parse.hpp"
#include "judgeaudit/prompt.hpp"
#include "judgeaudit/types.hpp"

namespace judgeaudit {

struct DecodingParams {
    double temperature = 0.6;
    double top_p = 0.95;
    int top_k = 20;
    int max_tokens = 1024;
    std::optional<int64_t> seed;
};

// Identifies one judge call inside a run; together with the item id this is
// the store key, and for simulated backends it fully determines the random
// stream.
struct ConditionKey {
    BiasKind bias = BiasKind::NoBias;
    Presentation presentation = Presentation::GoldAtA;
    int run_index = 1;
    InjectionMode injection_mode = InjectionMode::Preamble;

    bool operator==(const ConditionKey&) const = default;
    std::string canonical() const; // stable serialization, also the seed material
};

struct CallKey {
    std::string item_id;
    ConditionKey condition;

    // Test-only side channel for simulated judges: the slot holding the gold
    // candidate. The runner populates it only for backends that ask for it;
    // remote backends never see it.
    std::optional<Side> gold_position;

    std::string canonical() const;
};

enum class BackendErrorCategory : uint8_t { Transport, RateLimit, HttpStatus, BadResponseShape };

std::string_view to_label(BackendErrorCategory category);
std::optional<BackendErrorCategory> parse_backend_error(std::string_view text);

// Thrown by backends after retries are exhausted; the runner records the
// category instead of aborting the grid.
class BackendCallError : public Error {
public:
    BackendCallError(BackendErrorCategory category, const std::string& message)
        : Error(ErrorKind::Backend, message), category_(category) {}
    BackendErrorCategory category() const { return category_; }

private:
    BackendErrorCategory category_;
};

struct JudgeResponse {
    std::string raw_text;
    std::optional<std::vector<TokenProb>> token_confidences;
    bool truncated = false;
    int64_t latency_ms = 0;
    std::string backend_id;
};

// One contract, two families: seeded simulated judges for CI and a remote
// chat-completion backend for live audits. Every call is stateless; no
// conversation carries over between calls.
class JudgeBackend {
public:
    virtual ~JudgeBackend() = default;

    virtual JudgeResponse query(const JudgePrompt& prompt, const DecodingParams& params,
                                const CallKey& call_key) = 0;

    virtual std::string id() const = 0;

    // Whether the runner should populate CallKey::gold_position.
    virtual bool wants_gold_position() const { return false; }
};

} // namespace judgeaudit
