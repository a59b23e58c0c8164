#pragma once

#include <memory>
#include <string>
#include <vector>

#include "judgeaudit/judge.hpp"

namespace judgeaudit {

// Where the judge-role paragraph travels on the wire. User keeps the whole
// prompt in one user message; System splits the role paragraph into a system
// message. Recorded in the backend id so run records carry the choice.
enum class RolePlacement : uint8_t { User, System };

// Chat-completion endpoint description. The auth token is read from the
// named environment variable at call time and never persisted anywhere.
struct EndpointConfig {
    std::string base_url;               // e.g. http://localhost:8000
    std::string path = "/v1/chat/completions";
    std::string model_name;
    std::string auth_token_env_var = "JUDGEAUDIT_API_TOKEN";
    int timeout_ms = 60000;
    int max_retries = 3;
    std::vector<int> backoff_ms = {500, 1000, 2000}; // per retry attempt
    bool request_token_probabilities = false;
    int max_parallel = 4; // in-flight request bound owned by the backend
    RolePlacement role_placement = RolePlacement::User;

    void validate() const;
};

// One stateless POST per query: a single user message carrying the prompt
// body plus the decoding fields. Retries transport failures, 429 and 5xx per
// the backoff schedule, then surfaces a categorized error.
class RemoteJudge final : public JudgeBackend {
public:
    explicit RemoteJudge(EndpointConfig config);
    ~RemoteJudge() override;

    JudgeResponse query(const JudgePrompt& prompt, const DecodingParams& params,
                        const CallKey& call_key) override;
    std::string id() const override;

    // Request body for one prompt; exposed so tests can pin the wire format.
    static std::string request_body(const std::string& model,
                                    const std::string& prompt_body,
                                    const DecodingParams& params,
                                    bool request_token_probabilities,
                                    RolePlacement role_placement = RolePlacement::User);

private:
    struct Gate;
    EndpointConfig config_;
    std::unique_ptr<Gate> gate_;
};

std::unique_ptr<RemoteJudge> make_remote_judge(EndpointConfig config);

} // namespace judgeaudit
