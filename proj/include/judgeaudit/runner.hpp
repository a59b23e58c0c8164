#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "judgeaudit/corpus.hpp"
#include "judgeaudit/judge.hpp"
#include "judgeaudit/store.hpp"

namespace judgeaudit {

// A fully validated run description. Everything needed to reproduce the run
// lands in the store metadata and the exported manifest.
struct RunPlan {
    std::string run_id; // derived from the plan content when left empty
    std::string corpus_path; // file path, or "synthetic:<items>:<seed>"
    SchemaConfig schema;
    CorpusFilter selector;
    std::vector<BiasKind> biases;
    std::vector<Presentation> presentations;
    int repeats = 1;
    bool consistency = false;
    InjectionMode injection_mode = InjectionMode::Preamble;
    DecodingParams decoding;
    std::string backend_descriptor;
    PresentationAlias alias;
    uint64_t master_seed = 0;
    int parallelism = 1;

    int64_t expected_calls(int64_t item_count) const {
        return item_count * static_cast<int64_t>(biases.size()) *
               static_cast<int64_t>(presentations.size()) * repeats;
    }
};

struct GridCell {
    std::string item_id;
    ConditionKey condition;
};

// Validates the plan and pins the run id. Rejects empty condition axes,
// repeats < 2 when consistency is requested, and Position in the bias list
// (it is realized by including both presentations).
RunPlan plan_run(RunPlan plan);

// The full item x bias x presentation x run_index grid, in deterministic order.
std::vector<GridCell> plan_grid(const RunPlan& plan, const Corpus& corpus);

// Canonical metadata document for the store sidecar; byte-stable.
std::string plan_to_json(const RunPlan& plan);
RunPlan plan_from_json(const std::string& text);

// Loads the corpus a plan refers to, including regenerating synthetic ones.
Corpus corpus_for_plan(const RunPlan& plan);

struct RunSummary {
    int64_t planned = 0;
    int64_t skipped_resume = 0;
    int64_t executed = 0;
    int64_t answered = 0;
    int64_t non_judgments = 0;
    int64_t errors = 0;
};

struct ExecuteOptions {
    // Stop after this many new calls (0 = no limit). Existing records still
    // count toward completion, so a capped run resumes cleanly.
    int64_t max_calls = 0;
};

// Runs every grid cell not yet in the store, each call isolated, with
// bounded parallelism. Per-call backend failures become error records; the
// grid never aborts for them. Resume is idempotent: record content depends
// only on (master_seed, call key), never on scheduling.
RunSummary execute(const RunPlan& plan, const Corpus& corpus, JudgeBackend& backend,
                   RunStore& store, const ExecuteOptions& options = {});

} // namespace judgeaudit
