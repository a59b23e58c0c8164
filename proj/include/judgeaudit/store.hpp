#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "judgeaudit/judge.hpp"
#include "judgeaudit/parse.hpp"

namespace judgeaudit {

// One judge call, as persisted. Append-only; pred is present iff the parse
// outcome is Answered.
struct RunRecord {
    std::string run_id;
    std::string item_id;
    ConditionKey condition;
    std::string prompt_digest;
    Side gold_position = Side::A;
    std::string raw_text;
    ParseOutcome parse;
    std::optional<Side> pred;
    std::optional<double> decision_confidence;
    int64_t latency_ms = 0;
    std::string backend_id;
    std::optional<BackendErrorCategory> error;

    std::string key() const { return item_id + "|" + condition.canonical(); }
    std::string to_json_line() const;
    static RunRecord from_json_line(const std::string& line);
};

inline constexpr const char* kStoreSchemaVersion = "run-store-v1";
inline constexpr const char* kMetadataFileName = "metadata.json";
inline constexpr const char* kRecordsFileName = "records.jsonl";

// A run directory: metadata.json (written before the first record) plus an
// append-only records.jsonl. Appends are serialized through a single writer;
// records are never rewritten, so an interrupted run resumes by skipping the
// keys already present.
class RunStore {
public:
    // Opens (creating if needed) a run directory. metadata_json is the plan
    // sidecar; on an existing directory it must match what was stored, else
    // the open refuses rather than overwrite.
    RunStore(const std::filesystem::path& directory, const std::string& metadata_json);

    // Read-only open of an existing run directory.
    static std::vector<RunRecord> read_records(const std::filesystem::path& directory);
    static std::string read_metadata(const std::filesystem::path& directory);

    void append(const RunRecord& record);
    bool contains(const std::string& key) const;
    size_t size() const;
    const std::filesystem::path& directory() const { return directory_; }

private:
    std::filesystem::path directory_;
    mutable std::mutex mutex_;
    std::ofstream out_;
    std::set<std::string> keys_;
};

} // namespace judgeaudit
