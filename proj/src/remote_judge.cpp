#include "judgeaudit/remote_judge.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace judgeaudit {

namespace {

using nlohmann::json;

std::string auth_token(const std::string& env_var) {
    const char* token = std::getenv(env_var.c_str());
    return token ? token : "";
}

} // namespace

void EndpointConfig::validate() const {
    if (base_url.empty()) throw Error(ErrorKind::Config, "endpoint base_url is empty");
    if (model_name.empty()) throw Error(ErrorKind::Config, "endpoint model_name is empty");
    if (timeout_ms <= 0) throw Error(ErrorKind::Config, "endpoint timeout_ms must be > 0");
    if (max_retries < 0) throw Error(ErrorKind::Config, "endpoint max_retries must be >= 0");
    if (max_parallel <= 0) throw Error(ErrorKind::Config, "endpoint max_parallel must be > 0");
}

// Counting semaphore bounding in-flight requests.
struct RemoteJudge::Gate {
    explicit Gate(int limit) : slots(limit) {}

    void acquire() {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return slots > 0; });
        --slots;
    }
    void release() {
        {
            std::lock_guard lock(mutex);
            ++slots;
        }
        cv.notify_one();
    }

    std::mutex mutex;
    std::condition_variable cv;
    int slots;
};

RemoteJudge::RemoteJudge(EndpointConfig config) : config_(std::move(config)) {
    config_.validate();
    if (auth_token(config_.auth_token_env_var).empty()) {
        throw Error(ErrorKind::Config,
                    "auth token environment variable '" + config_.auth_token_env_var +
                        "' is not set");
    }
    gate_ = std::make_unique<Gate>(config_.max_parallel);
}

RemoteJudge::~RemoteJudge() = default;

std::string RemoteJudge::id() const {
    std::string id = "remote:" + config_.model_name + "@" + config_.base_url;
    if (config_.role_placement == RolePlacement::System) id += "#system-role";
    return id;
}

std::string RemoteJudge::request_body(const std::string& model,
                                      const std::string& prompt_body,
                                      const DecodingParams& params,
                                      bool request_token_probabilities,
                                      RolePlacement role_placement) {
    json messages = json::array();
    // The assembled prompt opens with a single role paragraph followed by a
    // blank line; System placement lifts that paragraph out.
    const size_t paragraph_end = prompt_body.find("\n\n");
    if (role_placement == RolePlacement::System &&
        paragraph_end != std::string::npos) {
        messages.push_back(
            json{{"role", "system"}, {"content", prompt_body.substr(0, paragraph_end)}});
        messages.push_back(
            json{{"role", "user"}, {"content", prompt_body.substr(paragraph_end + 2)}});
    } else {
        messages.push_back(json{{"role", "user"}, {"content", prompt_body}});
    }

    json body;
    body["model"] = model;
    body["messages"] = std::move(messages);
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    body["top_k"] = params.top_k;
    body["max_tokens"] = params.max_tokens;
    if (params.seed) body["seed"] = *params.seed;
    if (request_token_probabilities) body["logprobs"] = true;
    return body.dump();
}

JudgeResponse RemoteJudge::query(const JudgePrompt& prompt, const DecodingParams& params,
                                 const CallKey&) {
    gate_->acquire();
    struct Release {
        Gate* gate;
        ~Release() { gate->release(); }
    } release{gate_.get()};

    const std::string request =
        request_body(config_.model_name, prompt.body, params,
                     config_.request_token_probabilities, config_.role_placement);

    httplib::Headers headers = {
        {"Authorization", "Bearer " + auth_token(config_.auth_token_env_var)},
    };

    const auto started = std::chrono::steady_clock::now();
    std::string last_error;
    BackendErrorCategory last_category = BackendErrorCategory::Transport;

    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            const size_t idx = static_cast<size_t>(attempt - 1);
            const int delay = idx < config_.backoff_ms.size()
                                  ? config_.backoff_ms[idx]
                                  : (config_.backoff_ms.empty() ? 1000 : config_.backoff_ms.back());
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }

        // Fresh connection per call; no session state leaks between queries.
        httplib::Client client(config_.base_url);
        const time_t timeout_sec = config_.timeout_ms / 1000;
        const time_t timeout_usec = (config_.timeout_ms % 1000) * 1000;
        client.set_connection_timeout(timeout_sec, timeout_usec);
        client.set_read_timeout(timeout_sec, timeout_usec);
        client.set_write_timeout(timeout_sec, timeout_usec);

        auto result = client.Post(config_.path, headers, request, "application/json");
        if (!result) {
            last_error = "transport failure: " + httplib::to_string(result.error());
            last_category = BackendErrorCategory::Transport;
            continue;
        }
        if (result->status == 429) {
            last_error = "rate limited (429)";
            last_category = BackendErrorCategory::RateLimit;
            continue;
        }
        if (result->status >= 500) {
            last_error = "server error (" + std::to_string(result->status) + ")";
            last_category = BackendErrorCategory::HttpStatus;
            continue;
        }
        if (result->status != 200) {
            throw BackendCallError(BackendErrorCategory::HttpStatus,
                                   "unexpected status " + std::to_string(result->status));
        }

        json payload = json::parse(result->body, nullptr, false);
        if (payload.is_discarded() || !payload.contains("choices") ||
            !payload["choices"].is_array() || payload["choices"].empty()) {
            throw BackendCallError(BackendErrorCategory::BadResponseShape,
                                   "response is not a chat completion");
        }
        const json& choice = payload["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string()) {
            throw BackendCallError(BackendErrorCategory::BadResponseShape,
                                   "choice carries no message content");
        }

        JudgeResponse response;
        response.backend_id = id();
        response.raw_text = choice["message"]["content"].get<std::string>();
        response.truncated =
            choice.value("finish_reason", std::string{}) == "length";
        if (choice.contains("logprobs") && choice["logprobs"].is_object() &&
            choice["logprobs"].contains("content") &&
            choice["logprobs"]["content"].is_array()) {
            std::vector<TokenProb> tokens;
            for (const json& entry : choice["logprobs"]["content"]) {
                if (!entry.contains("token")) continue;
                TokenProb token;
                token.token = entry["token"].get<std::string>();
                if (entry.contains("logprob") && entry["logprob"].is_number()) {
                    token.probability = std::exp(entry["logprob"].get<double>());
                } else if (entry.contains("probability") &&
                           entry["probability"].is_number()) {
                    token.probability = entry["probability"].get<double>();
                }
                tokens.push_back(std::move(token));
            }
            response.token_confidences = std::move(tokens);
        }
        response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
        return response;
    }

    throw BackendCallError(last_category,
                           last_error + " after " + std::to_string(config_.max_retries + 1) +
                               " attempts");
}

std::unique_ptr<RemoteJudge> make_remote_judge(EndpointConfig config) {
    return std::make_unique<RemoteJudge>(std::move(config));
}

} // namespace judgeaudit
