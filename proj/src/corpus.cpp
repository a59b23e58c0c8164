#include "judgeaudit/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "judgeaudit/hash.hpp"

namespace judgeaudit {

namespace {

using nlohmann::json;

[[noreturn]] void corpus_error(const std::string& path, size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line_no << ": " << what;
    throw Error(ErrorKind::Corpus, msg.str());
}

std::string require_string(const json& record, const std::string& field,
                           const std::string& canonical, const std::string& path,
                           size_t line_no) {
    auto it = record.find(field);
    if (it == record.end() || it->is_null()) {
        corpus_error(path, line_no,
                     "missing field '" + field + "' (" + canonical + ")");
    }
    if (!it->is_string()) {
        corpus_error(path, line_no, "field '" + field + "' must be a string");
    }
    return it->get<std::string>();
}

} // namespace

Corpus load_corpus(const std::string& path, const SchemaConfig& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Corpus, "cannot open corpus file: " + path);
    }

    Corpus corpus;
    corpus.source_path = path;
    corpus.schema_version = kCorpusSchemaVersion;

    std::unordered_set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            corpus_error(path, line_no, "line is not a JSON object");
        }

        EvalItem item;
        item.id = require_string(record, schema.id, "id", path, line_no);
        const std::string task_text =
            require_string(record, schema.task, "task", path, line_no);
        const std::string difficulty_text =
            require_string(record, schema.difficulty, "difficulty", path, line_no);
        item.instruction =
            require_string(record, schema.instruction, "instruction", path, line_no);
        item.good_response =
            require_string(record, schema.good_response, "good_response", path, line_no);
        item.bad_response =
            require_string(record, schema.bad_response, "bad_response", path, line_no);

        auto task = parse_task(task_text);
        if (!task) corpus_error(path, line_no, "unknown task '" + task_text + "'");
        item.task = *task;

        auto difficulty = parse_difficulty(difficulty_text);
        if (!difficulty) {
            corpus_error(path, line_no, "unknown difficulty '" + difficulty_text + "'");
        }
        item.difficulty = *difficulty;

        if (item.instruction.empty()) corpus_error(path, line_no, "empty instruction");
        if (item.good_response.empty()) corpus_error(path, line_no, "empty good_response");
        if (item.bad_response.empty()) corpus_error(path, line_no, "empty bad_response");
        if (item.good_response == item.bad_response) {
            corpus_error(path, line_no, "good_response equals bad_response");
        }
        if (!seen_ids.insert(item.id).second) {
            corpus_error(path, line_no, "duplicate id '" + item.id + "'");
        }

        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

int64_t StatsTable::count(TaskKind task, Difficulty difficulty) const {
    auto t = counts.find(task);
    if (t == counts.end()) return 0;
    auto d = t->second.find(difficulty);
    return d == t->second.end() ? 0 : d->second;
}

double StatsTable::in_task_share(TaskKind task, Difficulty difficulty) const {
    auto t = task_totals.find(task);
    if (t == task_totals.end() || t->second == 0) return 0.0;
    return 100.0 * static_cast<double>(count(task, difficulty)) /
           static_cast<double>(t->second);
}

double StatsTable::corpus_share(TaskKind task) const {
    if (total == 0) return 0.0;
    auto t = task_totals.find(task);
    const int64_t n = t == task_totals.end() ? 0 : t->second;
    return 100.0 * static_cast<double>(n) / static_cast<double>(total);
}

StatsTable corpus_stats(const Corpus& corpus) {
    StatsTable table;
    table.total = static_cast<int64_t>(corpus.items.size());
    for (const EvalItem& item : corpus.items) {
        ++table.counts[item.task][item.difficulty];
        ++table.task_totals[item.task];
    }
    return table;
}

Corpus select(const Corpus& corpus, const CorpusFilter& filter) {
    if (filter.ids) {
        std::unordered_set<std::string> present;
        for (const EvalItem& item : corpus.items) present.insert(item.id);
        std::string missing;
        for (const std::string& id : *filter.ids) {
            if (!present.count(id)) {
                if (!missing.empty()) missing += ", ";
                missing += id;
            }
        }
        if (!missing.empty()) {
            throw Error(ErrorKind::Corpus, "filter ids not in corpus: " + missing);
        }
    }

    Corpus out;
    out.source_path = corpus.source_path;
    out.schema_version = corpus.schema_version;
    for (const EvalItem& item : corpus.items) {
        if (filter.task && item.task != *filter.task) continue;
        if (filter.difficulty && item.difficulty != *filter.difficulty) continue;
        if (filter.ids && !filter.ids->count(item.id)) continue;
        if (filter.max_items &&
            static_cast<int64_t>(out.items.size()) >= *filter.max_items) {
            break;
        }
        out.items.push_back(item);
    }
    return out;
}

Corpus make_synthetic_corpus(int64_t item_count, uint64_t seed) {
    static constexpr TaskKind kTasks[] = {TaskKind::CodeGen, TaskKind::CodeRepair,
                                          TaskKind::TestGen};
    static constexpr Difficulty kLevels[] = {Difficulty::Easy, Difficulty::Medium,
                                             Difficulty::Hard};
    Corpus corpus;
    corpus.source_path = "<synthetic>";
    corpus.schema_version = kCorpusSchemaVersion;
    corpus.items.reserve(static_cast<size_t>(item_count));
    for (int64_t i = 0; i < item_count; ++i) {
        EvalItem item;
        item.id = "syn-" + hex64(seed) + "-" + std::to_string(i);
        item.task = kTasks[i % 3];
        item.difficulty = kLevels[(i / 3) % 3];
        item.instruction = "Write a function for synthetic case " + std::to_string(i) + ".";
        item.good_response = "def solve_" + std::to_string(i) + "():\n    return " +
                             std::to_string(i) + "\n";
        item.bad_response = "def solve_" + std::to_string(i) + "():\n    return " +
                            std::to_string(i + 1) + "\n";
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

} // namespace judgeaudit
