#include "judgeaudit/store.hpp"

#include <json.hpp>

namespace judgeaudit {

namespace {

using nlohmann::json;

json condition_to_json(const ConditionKey& condition) {
    return json{
        {"bias", to_label(condition.bias)},
        {"presentation", to_label(condition.presentation)},
        {"run_index", condition.run_index},
        {"injection_mode", to_label(condition.injection_mode)},
    };
}

ConditionKey condition_from_json(const json& j) {
    ConditionKey condition;
    auto bias = parse_bias(j.at("bias").get<std::string>());
    if (!bias) throw Error(ErrorKind::Store, "record carries unknown bias label");
    condition.bias = *bias;
    const std::string presentation = j.at("presentation").get<std::string>();
    if (presentation == "GoldAtA") {
        condition.presentation = Presentation::GoldAtA;
    } else if (presentation == "GoldAtB") {
        condition.presentation = Presentation::GoldAtB;
    } else {
        throw Error(ErrorKind::Store, "record carries unknown presentation label");
    }
    condition.run_index = j.at("run_index").get<int>();
    auto mode = parse_injection_mode(j.at("injection_mode").get<std::string>());
    if (!mode) throw Error(ErrorKind::Store, "record carries unknown injection mode");
    condition.injection_mode = *mode;
    return condition;
}

} // namespace

std::string RunRecord::to_json_line() const {
    json j;
    j["run_id"] = run_id;
    j["item_id"] = item_id;
    j["condition"] = condition_to_json(condition);
    j["prompt_digest"] = prompt_digest;
    j["gold_position"] = to_label(gold_position);
    j["raw_text"] = raw_text;
    if (parse.answered()) {
        j["parse"] = json{{"outcome", "Answered"},
                          {"verdict", to_label(parse.verdict())},
                          {"marker_offset", parse.marker_offset()}};
    } else {
        j["parse"] = json{{"outcome", "NonJudgment"}, {"reason", to_label(parse.reason())}};
    }
    if (pred) j["pred"] = to_label(*pred);
    if (decision_confidence) j["decision_confidence"] = *decision_confidence;
    j["latency_ms"] = latency_ms;
    j["backend_id"] = backend_id;
    if (error) j["error"] = to_label(*error);
    return j.dump();
}

RunRecord RunRecord::from_json_line(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::Store, "corrupt record line (not a JSON object)");
    }
    RunRecord record;
    record.run_id = j.at("run_id").get<std::string>();
    record.item_id = j.at("item_id").get<std::string>();
    record.condition = condition_from_json(j.at("condition"));
    record.prompt_digest = j.at("prompt_digest").get<std::string>();
    auto gold = parse_side(j.at("gold_position").get<std::string>());
    if (!gold) throw Error(ErrorKind::Store, "record carries unknown gold position");
    record.gold_position = *gold;
    record.raw_text = j.at("raw_text").get<std::string>();

    const json& parse = j.at("parse");
    const std::string outcome = parse.at("outcome").get<std::string>();
    if (outcome == "Answered") {
        auto verdict = parse_side(parse.at("verdict").get<std::string>());
        if (!verdict) throw Error(ErrorKind::Store, "record carries unknown verdict");
        record.parse =
            ParseOutcome::make_answered(*verdict, parse.at("marker_offset").get<size_t>());
    } else if (outcome == "NonJudgment") {
        auto reason = parse_non_judgment_reason(parse.at("reason").get<std::string>());
        if (!reason) throw Error(ErrorKind::Store, "record carries unknown parse reason");
        record.parse = ParseOutcome::make_non_judgment(*reason);
    } else {
        throw Error(ErrorKind::Store, "record carries unknown parse outcome");
    }

    if (j.contains("pred")) {
        auto pred = parse_side(j.at("pred").get<std::string>());
        if (!pred) throw Error(ErrorKind::Store, "record carries unknown pred");
        record.pred = pred;
    }
    if (j.contains("decision_confidence")) {
        record.decision_confidence = j.at("decision_confidence").get<double>();
    }
    record.latency_ms = j.at("latency_ms").get<int64_t>();
    record.backend_id = j.at("backend_id").get<std::string>();
    if (j.contains("error")) {
        auto error = parse_backend_error(j.at("error").get<std::string>());
        if (!error) throw Error(ErrorKind::Store, "record carries unknown error category");
        record.error = error;
    }

    if (record.pred.has_value() != record.parse.answered()) {
        throw Error(ErrorKind::Store, "record pred/parse mismatch for key " + record.key());
    }
    return record;
}

RunStore::RunStore(const std::filesystem::path& directory, const std::string& metadata_json)
    : directory_(directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec) {
        throw Error(ErrorKind::Store,
                    "cannot create run directory " + directory_.string() + ": " + ec.message());
    }

    const fs::path metadata_path = directory_ / kMetadataFileName;
    const fs::path records_path = directory_ / kRecordsFileName;

    if (fs::exists(metadata_path)) {
        // Resuming: the stored plan must be the same plan.
        const std::string existing = read_metadata(directory_);
        if (existing != metadata_json) {
            throw Error(ErrorKind::Store,
                        "run directory " + directory_.string() +
                            " holds a different plan; refusing to mix runs");
        }
        for (RunRecord& record : read_records(directory_)) {
            keys_.insert(record.key());
        }
    } else {
        if (fs::exists(records_path)) {
            throw Error(ErrorKind::Store,
                        "run directory has records but no metadata; refusing to touch it");
        }
        // Metadata lands on disk before any record does.
        std::ofstream meta(metadata_path, std::ios::binary | std::ios::trunc);
        if (!meta) {
            throw Error(ErrorKind::Store, "cannot write " + metadata_path.string());
        }
        meta << metadata_json;
        meta.flush();
        if (!meta) {
            throw Error(ErrorKind::Store, "short write to " + metadata_path.string());
        }
    }

    out_.open(records_path, std::ios::binary | std::ios::app);
    if (!out_) {
        throw Error(ErrorKind::Store, "cannot open " + records_path.string() + " for append");
    }
}

std::vector<RunRecord> RunStore::read_records(const std::filesystem::path& directory) {
    const std::filesystem::path records_path = directory / kRecordsFileName;
    std::ifstream in(records_path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(records_path)) return {};
        throw Error(ErrorKind::Store, "cannot open " + records_path.string());
    }
    std::vector<RunRecord> records;
    std::set<std::string> keys;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        RunRecord record = RunRecord::from_json_line(line);
        if (!keys.insert(record.key()).second) {
            throw Error(ErrorKind::Store,
                        records_path.string() + ":" + std::to_string(line_no) +
                            ": duplicate record key " + record.key());
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string RunStore::read_metadata(const std::filesystem::path& directory) {
    const std::filesystem::path metadata_path = directory / kMetadataFileName;
    std::ifstream in(metadata_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Store, "cannot open " + metadata_path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void RunStore::append(const RunRecord& record) {
    std::lock_guard lock(mutex_);
    if (!keys_.insert(record.key()).second) {
        throw Error(ErrorKind::Store, "duplicate record key " + record.key());
    }
    out_ << record.to_json_line() << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorKind::Store, "failed to append record " + record.key());
}

bool RunStore::contains(const std::string& key) const {
    std::lock_guard lock(mutex_);
    return keys_.count(key) > 0;
}

size_t RunStore::size() const {
    std::lock_guard lock(mutex_);
    return keys_.size();
}

} // namespace judgeaudit
