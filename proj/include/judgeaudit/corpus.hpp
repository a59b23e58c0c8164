#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "judgeaudit/types.hpp"

namespace judgeaudit {

// One benchmark triplet. good/bad labels are consumed as given; the harness
// never regenerates candidates or relabels.
struct EvalItem {
    std::string id;
    TaskKind task = TaskKind::CodeGen;
    Difficulty difficulty = Difficulty::Easy;
    std::string instruction;
    std::string good_response;
    std::string bad_response;
};

// Immutable after load; safe to share across workers.
struct Corpus {
    std::vector<EvalItem> items;
    std::string source_path;
    std::string schema_version;
};

inline constexpr const char* kCorpusSchemaVersion = "corpus-v1";

// Maps the canonical field names (id, task, difficulty, instruction,
// good_response, bad_response) to whatever the input file actually uses.
struct SchemaConfig {
    std::string id = "id";
    std::string task = "task";
    std::string difficulty = "difficulty";
    std::string instruction = "instruction";
    std::string good_response = "good_response";
    std::string bad_response = "bad_response";
};

// Loads a line-delimited JSON corpus. Any malformed line rejects the whole
// file (fail fast keeps metric denominators unambiguous). Errors name the
// offending field and 1-based line number.
Corpus load_corpus(const std::string& path, const SchemaConfig& schema = {});

struct StatsCell {
    int64_t count = 0;
};

// Counts per task x difficulty with in-task and corpus shares.
struct StatsTable {
    int64_t total = 0;
    // counts[task][difficulty]
    std::map<TaskKind, std::map<Difficulty, int64_t>> counts;
    std::map<TaskKind, int64_t> task_totals;

    int64_t count(TaskKind task, Difficulty difficulty) const;
    // In-task percentage share of one difficulty stratum (0 when the task is empty).
    double in_task_share(TaskKind task, Difficulty difficulty) const;
    // Task's percentage share of the whole corpus (0 when the corpus is empty).
    double corpus_share(TaskKind task) const;
};

StatsTable corpus_stats(const Corpus& corpus);

struct CorpusFilter {
    std::optional<TaskKind> task;
    std::optional<Difficulty> difficulty;
    std::optional<std::set<std::string>> ids;
    std::optional<int64_t> max_items; // prefix truncation after the other filters
};

// Subset preserving load order. An id filter naming absent ids is an error
// listing every missing id.
Corpus select(const Corpus& corpus, const CorpusFilter& filter);

// Deterministic synthetic corpus for simulation runs and self-tests: items
// cycle through every task x difficulty combination.
Corpus make_synthetic_corpus(int64_t item_count, uint64_t seed = 0);

} // namespace judgeaudit
