#include <doctest.h>

#include "helpers.hpp"

using namespace judgeaudit;
using namespace judgeaudit::test;

namespace {

RunRecord sample_record(const std::string& item_id, int run_index = 1) {
    RunRecord record;
    record.run_id = "run-x";
    record.item_id = item_id;
    record.condition =
        ConditionKey{BiasKind::Authority, Presentation::GoldAtB, run_index,
                     InjectionMode::Inline};
    record.prompt_digest = "abcd";
    record.gold_position = Side::B;
    record.raw_text = "My final verdict is Assistant B is better: [[B>A]]";
    record.parse = ParseOutcome::make_answered(Side::B, 43);
    record.pred = Side::B;
    record.decision_confidence = 0.75;
    record.latency_ms = 0;
    record.backend_id = "sim:test:1";
    return record;
}

} // namespace

TEST_CASE("record serialization round-trips every field") {
    const RunRecord record = sample_record("it-1");
    const RunRecord back = RunRecord::from_json_line(record.to_json_line());
    CHECK(back.run_id == record.run_id);
    CHECK(back.item_id == record.item_id);
    CHECK(back.condition == record.condition);
    CHECK(back.prompt_digest == record.prompt_digest);
    CHECK(back.gold_position == record.gold_position);
    CHECK(back.raw_text == record.raw_text);
    CHECK(back.parse == record.parse);
    CHECK(back.pred == record.pred);
    CHECK(back.decision_confidence == record.decision_confidence);
    CHECK(back.backend_id == record.backend_id);
    CHECK_FALSE(back.error.has_value());

    RunRecord non_judgment = sample_record("it-2");
    non_judgment.parse = ParseOutcome::make_non_judgment(NonJudgmentReason::Truncated);
    non_judgment.pred.reset();
    non_judgment.decision_confidence.reset();
    const RunRecord back2 = RunRecord::from_json_line(non_judgment.to_json_line());
    CHECK_FALSE(back2.parse.answered());
    CHECK(back2.parse.reason() == NonJudgmentReason::Truncated);
    CHECK_FALSE(back2.pred.has_value());

    RunRecord errored = sample_record("it-3");
    errored.parse = ParseOutcome::make_non_judgment(NonJudgmentReason::NoMarker);
    errored.pred.reset();
    errored.error = BackendErrorCategory::RateLimit;
    const RunRecord back3 = RunRecord::from_json_line(errored.to_json_line());
    CHECK(back3.error == BackendErrorCategory::RateLimit);
}

TEST_CASE("store appends, reloads, and rejects duplicates") {
    TempDir dir("store");
    {
        RunStore store(dir.file("run"), "{\"plan\":1}");
        CHECK(std::filesystem::exists(dir.file("run") / kMetadataFileName));
        store.append(sample_record("a"));
        store.append(sample_record("b"));
        CHECK(store.size() == 2);
        CHECK(store.contains(sample_record("a").key()));
        CHECK_THROWS_AS(store.append(sample_record("a")), Error);
    }
    const auto records = RunStore::read_records(dir.file("run"));
    REQUIRE(records.size() == 2);
    CHECK(RunStore::read_metadata(dir.file("run")) == "{\"plan\":1}");

    // reopening with the same plan resumes with the keys loaded
    RunStore resumed(dir.file("run"), "{\"plan\":1}");
    CHECK(resumed.size() == 2);
    CHECK_THROWS_AS(resumed.append(sample_record("b")), Error);
    resumed.append(sample_record("c"));
    CHECK(resumed.size() == 3);
}

TEST_CASE("store refuses a different plan or an orphaned records file") {
    TempDir dir("store");
    { RunStore store(dir.file("run"), "{\"plan\":1}"); }
    CHECK_THROWS_AS(RunStore(dir.file("run"), "{\"plan\":2}"), Error);

    std::filesystem::create_directories(dir.file("orphan"));
    write_text(dir.file("orphan") / kRecordsFileName, "{}\n");
    CHECK_THROWS_AS(RunStore(dir.file("orphan"), "{\"plan\":1}"), Error);
}

TEST_CASE("corrupt record lines abort the load with diagnostics") {
    TempDir dir("store");
    {
        RunStore store(dir.file("run"), "{}");
        store.append(sample_record("a"));
    }
    SUBCASE("garbage line") {
        std::ofstream out(dir.file("run") / kRecordsFileName, std::ios::app);
        out << "not json\n";
        out.close();
        CHECK_THROWS_AS(RunStore::read_records(dir.file("run")), Error);
    }
    SUBCASE("duplicate key on disk") {
        std::ofstream out(dir.file("run") / kRecordsFileName, std::ios::app);
        out << sample_record("a").to_json_line() << "\n";
        out.close();
        try {
            RunStore::read_records(dir.file("run"));
            FAIL("expected duplicate-key error");
        } catch (const Error& error) {
            CHECK(std::string(error.what()).find("duplicate record key") !=
                  std::string::npos);
        }
    }
}

TEST_CASE("missing store paths surface as store errors") {
    TempDir dir("store");
    CHECK_THROWS_AS(RunStore::read_metadata(dir.file("nope")), Error);
    CHECK(RunStore::read_records(dir.file("nope")).empty());
}
