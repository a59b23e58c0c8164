#include "judgeaudit/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "judgeaudit/bias.hpp"
#include "judgeaudit/hash.hpp"
#include "judgeaudit/prompt.hpp"

namespace judgeaudit {

namespace {

using nlohmann::json;

json selector_to_json(const CorpusFilter& selector) {
    json j = json::object();
    if (selector.task) j["task"] = to_label(*selector.task);
    if (selector.difficulty) j["difficulty"] = to_label(*selector.difficulty);
    if (selector.ids) j["ids"] = *selector.ids;
    if (selector.max_items) j["max_items"] = *selector.max_items;
    return j;
}

CorpusFilter selector_from_json(const json& j) {
    CorpusFilter selector;
    if (j.contains("task")) {
        auto task = parse_task(j.at("task").get<std::string>());
        if (!task) throw Error(ErrorKind::Plan, "plan selector: unknown task");
        selector.task = task;
    }
    if (j.contains("difficulty")) {
        auto difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
        if (!difficulty) throw Error(ErrorKind::Plan, "plan selector: unknown difficulty");
        selector.difficulty = difficulty;
    }
    if (j.contains("ids")) {
        selector.ids = j.at("ids").get<std::set<std::string>>();
    }
    if (j.contains("max_items")) selector.max_items = j.at("max_items").get<int64_t>();
    return selector;
}

} // namespace

RunPlan plan_run(RunPlan plan) {
    if (plan.biases.empty()) {
        throw Error(ErrorKind::Plan, "plan has an empty bias condition list");
    }
    if (plan.presentations.empty()) {
        throw Error(ErrorKind::Plan, "plan has an empty presentation list");
    }
    for (BiasKind bias : plan.biases) {
        if (bias == BiasKind::Position) {
            throw Error(ErrorKind::Plan,
                        "Position is realized via the presentation axis; run both "
                        "presentations instead of listing it as a bias condition");
        }
    }
    if (plan.repeats < 1) throw Error(ErrorKind::Plan, "repeats must be >= 1");
    if (plan.consistency && plan.repeats < 2) {
        throw Error(ErrorKind::Plan,
                    "consistency analysis needs repeats >= 2 (two independent runs)");
    }
    if (plan.parallelism < 1) throw Error(ErrorKind::Plan, "parallelism must be >= 1");

    if (plan.run_id.empty()) {
        RunPlan unnamed = plan;
        unnamed.run_id.clear();
        plan.run_id = "run-" + hex64(fnv1a64(plan_to_json(unnamed)));
    }
    return plan;
}

std::vector<GridCell> plan_grid(const RunPlan& plan, const Corpus& corpus) {
    const Corpus selected = select(corpus, plan.selector);
    std::vector<GridCell> grid;
    grid.reserve(static_cast<size_t>(plan.expected_calls(
        static_cast<int64_t>(selected.items.size()))));
    for (const EvalItem& item : selected.items) {
        for (BiasKind bias : plan.biases) {
            for (Presentation presentation : plan.presentations) {
                for (int run = 1; run <= plan.repeats; ++run) {
                    GridCell cell;
                    cell.item_id = item.id;
                    cell.condition =
                        ConditionKey{bias, presentation, run, plan.injection_mode};
                    grid.push_back(std::move(cell));
                }
            }
        }
    }
    return grid;
}

namespace {

json schema_to_json(const SchemaConfig& schema) {
    json j = json::object();
    const SchemaConfig defaults;
    if (schema.id != defaults.id) j["id"] = schema.id;
    if (schema.task != defaults.task) j["task"] = schema.task;
    if (schema.difficulty != defaults.difficulty) j["difficulty"] = schema.difficulty;
    if (schema.instruction != defaults.instruction) j["instruction"] = schema.instruction;
    if (schema.good_response != defaults.good_response) {
        j["good_response"] = schema.good_response;
    }
    if (schema.bad_response != defaults.bad_response) {
        j["bad_response"] = schema.bad_response;
    }
    return j;
}

SchemaConfig schema_from_json(const json& j) {
    SchemaConfig schema;
    schema.id = j.value("id", schema.id);
    schema.task = j.value("task", schema.task);
    schema.difficulty = j.value("difficulty", schema.difficulty);
    schema.instruction = j.value("instruction", schema.instruction);
    schema.good_response = j.value("good_response", schema.good_response);
    schema.bad_response = j.value("bad_response", schema.bad_response);
    return schema;
}

} // namespace

std::string plan_to_json(const RunPlan& plan) {
    json j;
    j["schema"] = kStoreSchemaVersion;
    j["catalog_version"] = kBiasCatalogVersion;
    j["run_id"] = plan.run_id;
    j["corpus_path"] = plan.corpus_path;
    j["corpus_schema"] = schema_to_json(plan.schema);
    j["selector"] = selector_to_json(plan.selector);
    json biases = json::array();
    for (BiasKind bias : plan.biases) biases.push_back(to_label(bias));
    j["biases"] = biases;
    json presentations = json::array();
    for (Presentation p : plan.presentations) presentations.push_back(to_label(p));
    j["presentations"] = presentations;
    j["alias_orig"] = to_label(plan.alias.orig);
    j["repeats"] = plan.repeats;
    j["consistency"] = plan.consistency;
    j["injection_mode"] = to_label(plan.injection_mode);
    j["decoding"] = json{{"temperature", plan.decoding.temperature},
                         {"top_p", plan.decoding.top_p},
                         {"top_k", plan.decoding.top_k},
                         {"max_tokens", plan.decoding.max_tokens}};
    if (plan.decoding.seed) j["decoding"]["seed"] = *plan.decoding.seed;
    j["backend"] = plan.backend_descriptor;
    j["master_seed"] = plan.master_seed;
    j["parallelism"] = plan.parallelism;
    return j.dump(2);
}

RunPlan plan_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::Plan, "plan document is not a JSON object");
    }
    RunPlan plan;
    plan.run_id = j.value("run_id", std::string{});
    plan.corpus_path = j.value("corpus_path", std::string{});
    if (j.contains("corpus_schema")) plan.schema = schema_from_json(j.at("corpus_schema"));
    if (j.contains("selector")) plan.selector = selector_from_json(j.at("selector"));
    for (const json& label : j.at("biases")) {
        auto bias = parse_bias(label.get<std::string>());
        if (!bias) throw Error(ErrorKind::Plan, "plan carries unknown bias label");
        plan.biases.push_back(*bias);
    }
    for (const json& label : j.at("presentations")) {
        const std::string name = label.get<std::string>();
        if (name == "GoldAtA") {
            plan.presentations.push_back(Presentation::GoldAtA);
        } else if (name == "GoldAtB") {
            plan.presentations.push_back(Presentation::GoldAtB);
        } else {
            throw Error(ErrorKind::Plan, "plan carries unknown presentation label");
        }
    }
    const std::string alias = j.value("alias_orig", std::string{"GoldAtA"});
    plan.alias.orig = alias == "GoldAtB" ? Presentation::GoldAtB : Presentation::GoldAtA;
    plan.repeats = j.value("repeats", 1);
    plan.consistency = j.value("consistency", false);
    auto mode = parse_injection_mode(j.value("injection_mode", std::string{"Preamble"}));
    if (!mode) throw Error(ErrorKind::Plan, "plan carries unknown injection mode");
    plan.injection_mode = *mode;
    if (j.contains("decoding")) {
        const json& d = j.at("decoding");
        plan.decoding.temperature = d.value("temperature", 0.6);
        plan.decoding.top_p = d.value("top_p", 0.95);
        plan.decoding.top_k = d.value("top_k", 20);
        plan.decoding.max_tokens = d.value("max_tokens", 1024);
        if (d.contains("seed")) plan.decoding.seed = d.at("seed").get<int64_t>();
    }
    plan.backend_descriptor = j.value("backend", std::string{});
    plan.master_seed = j.value("master_seed", uint64_t{0});
    plan.parallelism = j.value("parallelism", 1);
    return plan;
}

Corpus corpus_for_plan(const RunPlan& plan) {
    const std::string& path = plan.corpus_path;
    if (path.rfind("synthetic:", 0) == 0) {
        const size_t first = path.find(':');
        const size_t second = path.find(':', first + 1);
        if (second == std::string::npos) {
            throw Error(ErrorKind::Plan,
                        "synthetic corpus spec must be synthetic:<items>:<seed>");
        }
        const int64_t items = std::stoll(path.substr(first + 1, second - first - 1));
        const uint64_t seed = std::stoull(path.substr(second + 1));
        return make_synthetic_corpus(items, seed);
    }
    return load_corpus(path, plan.schema);
}

RunSummary execute(const RunPlan& plan, const Corpus& corpus, JudgeBackend& backend,
                   RunStore& store, const ExecuteOptions& options) {
    std::unordered_map<std::string, const EvalItem*> items;
    for (const EvalItem& item : corpus.items) items[item.id] = &item;

    const std::vector<GridCell> grid = plan_grid(plan, corpus);

    std::vector<const GridCell*> pending;
    pending.reserve(grid.size());
    RunSummary summary;
    summary.planned = static_cast<int64_t>(grid.size());
    for (const GridCell& cell : grid) {
        if (store.contains(cell.item_id + "|" + cell.condition.canonical())) {
            ++summary.skipped_resume;
        } else {
            pending.push_back(&cell);
        }
    }
    if (options.max_calls > 0 &&
        static_cast<int64_t>(pending.size()) > options.max_calls) {
        pending.resize(static_cast<size_t>(options.max_calls));
    }

    const bool give_gold = backend.wants_gold_position();

    std::atomic<size_t> next{0};
    std::atomic<int64_t> answered{0}, non_judgments{0}, errors{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            const size_t index = next.fetch_add(1);
            if (index >= pending.size()) return;
            const GridCell& cell = *pending[index];
            try {
                const EvalItem& item = *items.at(cell.item_id);
                const PresentedPair pair = present(item, cell.condition.presentation);
                const JudgePrompt prompt =
                    build_prompt(pair, item.instruction, bias_spec(cell.condition.bias),
                                 cell.condition.injection_mode);

                CallKey call_key;
                call_key.item_id = cell.item_id;
                call_key.condition = cell.condition;
                if (give_gold) call_key.gold_position = pair.gold_position;

                RunRecord record;
                record.run_id = plan.run_id;
                record.item_id = cell.item_id;
                record.condition = cell.condition;
                record.prompt_digest = prompt.content_digest;
                record.gold_position = pair.gold_position;

                try {
                    const JudgeResponse response =
                        backend.query(prompt, plan.decoding, call_key);
                    record.raw_text = response.raw_text;
                    record.latency_ms = response.latency_ms;
                    record.backend_id = response.backend_id;
                    record.parse = parse_verdict(response.raw_text, response.truncated);
                    if (record.parse.answered()) {
                        record.pred = record.parse.verdict();
                        if (response.token_confidences) {
                            const DecisionConfidence confidence = decision_confidence(
                                response.raw_text, *response.token_confidences,
                                record.parse);
                            record.decision_confidence = confidence.value;
                        }
                        answered.fetch_add(1);
                    } else {
                        non_judgments.fetch_add(1);
                    }
                } catch (const BackendCallError& error) {
                    record.backend_id = backend.id();
                    record.parse =
                        ParseOutcome::make_non_judgment(NonJudgmentReason::NoMarker);
                    record.error = error.category();
                    errors.fetch_add(1);
                }

                store.append(record);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const size_t thread_count =
        std::min<size_t>(static_cast<size_t>(plan.parallelism), std::max<size_t>(pending.size(), 1));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(thread_count);
        for (size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
        for (std::thread& thread : threads) thread.join();
    }
    if (failure) std::rethrow_exception(failure);

    summary.executed = static_cast<int64_t>(pending.size());
    summary.answered = answered.load();
    summary.non_judgments = non_judgments.load();
    summary.errors = errors.load();
    return summary;
}

} // namespace judgeaudit
