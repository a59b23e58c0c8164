#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "judgeaudit/corpus.hpp"
#include "judgeaudit/runner.hpp"
#include "judgeaudit/sim_judge.hpp"

namespace judgeaudit::test {

// Unique per-instance scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<uint64_t> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("judgeaudit-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline std::string corpus_line(const std::string& id, const std::string& task,
                               const std::string& difficulty,
                               const std::string& instruction = "Solve the task.",
                               const std::string& good = "def f():\n    return 1\n",
                               const std::string& bad = "def f():\n    return 2\n") {
    nlohmann::json j;
    j["id"] = id;
    j["task"] = task;
    j["difficulty"] = difficulty;
    j["instruction"] = instruction;
    j["good_response"] = good;
    j["bad_response"] = bad;
    return j.dump();
}

// The 3-item corpus used across examples: 2 CodeGen/Easy + 1 TestGen/Hard.
inline std::string three_item_corpus_text() {
    return corpus_line("a1", "CodeGen", "Easy") + "\n" +
           corpus_line("a2", "CodeGen", "Easy") + "\n" +
           corpus_line("h1", "TestGen", "Hard") + "\n";
}

inline RunPlan small_plan(const std::string& corpus_path,
                          std::vector<BiasKind> biases = {BiasKind::NoBias},
                          int repeats = 1, uint64_t master_seed = 7) {
    RunPlan plan;
    plan.corpus_path = corpus_path;
    plan.biases = std::move(biases);
    plan.presentations = {Presentation::GoldAtA, Presentation::GoldAtB};
    plan.repeats = repeats;
    plan.master_seed = master_seed;
    plan.backend_descriptor = "test";
    return plan_run(std::move(plan));
}

} // namespace judgeaudit::test
