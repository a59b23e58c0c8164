#include <doctest.h>

#include "helpers.hpp"

using namespace judgeaudit;
using namespace judgeaudit::test;

TEST_CASE("load_corpus reads a minimal well-formed record") {
    TempDir dir("corpus");
    write_text(dir.file("c.jsonl"),
               corpus_line("x1", "CodeGen", "Easy", "...", "a", "b") + "\n");
    const Corpus corpus = load_corpus(dir.file("c.jsonl").string());
    REQUIRE(corpus.items.size() == 1);
    CHECK(corpus.items[0].id == "x1");
    CHECK(corpus.items[0].task == TaskKind::CodeGen);
    CHECK(corpus.items[0].difficulty == Difficulty::Easy);
    CHECK(corpus.items[0].good_response == "a");
    CHECK(corpus.items[0].bad_response == "b");
}

TEST_CASE("load_corpus rejects a line missing bad_response, naming field and line") {
    TempDir dir("corpus");
    nlohmann::json j = nlohmann::json::parse(corpus_line("x1", "CodeGen", "Easy"));
    j.erase("bad_response");
    write_text(dir.file("c.jsonl"),
               corpus_line("ok", "CodeGen", "Easy") + "\n" + j.dump() + "\n");
    try {
        load_corpus(dir.file("c.jsonl").string());
        FAIL("expected corpus error");
    } catch (const Error& error) {
        CHECK(error.kind() == ErrorKind::Corpus);
        CHECK(std::string(error.what()).find("bad_response") != std::string::npos);
        CHECK(std::string(error.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("load_corpus error catalogue") {
    TempDir dir("corpus");
    auto expect_reject = [&](const std::string& content, const std::string& needle) {
        write_text(dir.file("bad.jsonl"), content);
        try {
            load_corpus(dir.file("bad.jsonl").string());
            FAIL("expected rejection for: ", needle);
        } catch (const Error& error) {
            CHECK(std::string(error.what()).find(needle) != std::string::npos);
        }
    };
    expect_reject(corpus_line("d", "CodeGen", "Easy") + "\n" +
                      corpus_line("d", "TestGen", "Hard") + "\n",
                  "duplicate id");
    expect_reject(corpus_line("x", "CodeZen", "Easy") + "\n", "unknown task");
    expect_reject(corpus_line("x", "CodeGen", "Trivial") + "\n", "unknown difficulty");
    expect_reject("not json\n", "not a JSON object");
    expect_reject(corpus_line("x", "CodeGen", "Easy", "i", "same", "same") + "\n",
                  "good_response equals bad_response");
    CHECK_THROWS_AS(load_corpus((dir.path() / "missing.jsonl").string()), Error);
}

TEST_CASE("whole file is rejected when any line is malformed") {
    TempDir dir("corpus");
    write_text(dir.file("c.jsonl"), corpus_line("a", "CodeGen", "Easy") + "\n" +
                                        "garbage\n" +
                                        corpus_line("b", "CodeGen", "Easy") + "\n");
    CHECK_THROWS_AS(load_corpus(dir.file("c.jsonl").string()), Error);
}

TEST_CASE("schema_config maps external field names") {
    TempDir dir("corpus");
    nlohmann::json j;
    j["qid"] = "x1";
    j["task"] = "TestGen";
    j["difficulty"] = "Hard";
    j["prompt"] = "p";
    j["chosen"] = "good";
    j["rejected"] = "bad";
    write_text(dir.file("c.jsonl"), j.dump() + "\n");
    SchemaConfig schema;
    schema.id = "qid";
    schema.instruction = "prompt";
    schema.good_response = "chosen";
    schema.bad_response = "rejected";
    const Corpus corpus = load_corpus(dir.file("c.jsonl").string(), schema);
    REQUIRE(corpus.items.size() == 1);
    CHECK(corpus.items[0].instruction == "p");
    CHECK(corpus.items[0].good_response == "good");
}

TEST_CASE("loading the same file twice yields structurally identical corpora") {
    TempDir dir("corpus");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const Corpus first = load_corpus(dir.file("c.jsonl").string());
    const Corpus second = load_corpus(dir.file("c.jsonl").string());
    REQUIRE(first.items.size() == second.items.size());
    for (size_t i = 0; i < first.items.size(); ++i) {
        CHECK(first.items[i].id == second.items[i].id);
        CHECK(first.items[i].task == second.items[i].task);
        CHECK(first.items[i].good_response == second.items[i].good_response);
    }
}

TEST_CASE("corpus_stats matches the published benchmark breakdown") {
    // Synthesize a corpus with exactly the benchmark's per-cell counts and
    // check the derived counts and shares against the published table.
    Corpus corpus;
    struct Cell {
        TaskKind task;
        Difficulty difficulty;
        int count;
    };
    const Cell cells[] = {
        {TaskKind::CodeGen, Difficulty::Easy, 694},
        {TaskKind::CodeGen, Difficulty::Medium, 580},
        {TaskKind::CodeGen, Difficulty::Hard, 829},
        {TaskKind::CodeRepair, Difficulty::Easy, 738},
        {TaskKind::CodeRepair, Difficulty::Medium, 703},
        {TaskKind::CodeRepair, Difficulty::Hard, 968},
        {TaskKind::TestGen, Difficulty::Easy, 184},
        {TaskKind::TestGen, Difficulty::Medium, 162},
        {TaskKind::TestGen, Difficulty::Hard, 494},
    };
    int next = 0;
    for (const Cell& cell : cells) {
        for (int i = 0; i < cell.count; ++i) {
            EvalItem item;
            item.id = "i" + std::to_string(next++);
            item.task = cell.task;
            item.difficulty = cell.difficulty;
            item.instruction = "x";
            item.good_response = "g";
            item.bad_response = "b";
            corpus.items.push_back(std::move(item));
        }
    }

    // The published shares are 2-decimal (and 1-decimal in-task) roundings;
    // compare at exactly the printed precision.
    auto printed = [](double value, int decimals) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
        return std::string(buffer);
    };

    const StatsTable stats = corpus_stats(corpus);
    CHECK(stats.total == 5352);
    CHECK(stats.task_totals.at(TaskKind::CodeGen) == 2103);
    CHECK(stats.task_totals.at(TaskKind::CodeRepair) == 2409);
    CHECK(stats.task_totals.at(TaskKind::TestGen) == 840);
    CHECK(stats.count(TaskKind::TestGen, Difficulty::Hard) == 494);
    CHECK(printed(stats.corpus_share(TaskKind::CodeGen), 2) == "39.29");
    CHECK(printed(stats.corpus_share(TaskKind::CodeRepair), 2) == "45.01");
    CHECK(printed(stats.corpus_share(TaskKind::TestGen), 2) == "15.70");
    CHECK(printed(stats.in_task_share(TaskKind::CodeGen, Difficulty::Easy), 1) == "33.0");
    CHECK(printed(stats.in_task_share(TaskKind::TestGen, Difficulty::Hard), 1) == "58.8");
}

TEST_CASE("corpus_stats on empty and tiny corpora") {
    const StatsTable empty = corpus_stats(Corpus{});
    CHECK(empty.total == 0);
    CHECK(empty.count(TaskKind::CodeGen, Difficulty::Easy) == 0);
    CHECK(empty.corpus_share(TaskKind::CodeGen) == 0.0);

    TempDir dir("corpus");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const StatsTable stats = corpus_stats(load_corpus(dir.file("c.jsonl").string()));
    CHECK(stats.count(TaskKind::CodeGen, Difficulty::Easy) == 2);
    CHECK(stats.count(TaskKind::TestGen, Difficulty::Hard) == 1);
    CHECK(stats.corpus_share(TaskKind::CodeGen) == doctest::Approx(100.0 * 2 / 3));
    CHECK(stats.corpus_share(TaskKind::TestGen) == doctest::Approx(100.0 / 3));
}

TEST_CASE("corpus_stats counts equal a brute-force recount") {
    const Corpus corpus = make_synthetic_corpus(137, 5);
    const StatsTable stats = corpus_stats(corpus);
    int64_t total = 0;
    for (int t = 0; t < 3; ++t) {
        for (int d = 0; d < 3; ++d) {
            int64_t expected = 0;
            for (const EvalItem& item : corpus.items) {
                if (static_cast<int>(item.task) == t &&
                    static_cast<int>(item.difficulty) == d) {
                    ++expected;
                }
            }
            total += expected;
            CHECK(stats.count(static_cast<TaskKind>(t), static_cast<Difficulty>(d)) ==
                  expected);
        }
    }
    CHECK(stats.total == total);
}

TEST_CASE("select filters preserve order and compose") {
    TempDir dir("corpus");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const Corpus corpus = load_corpus(dir.file("c.jsonl").string());

    SUBCASE("task filter keeps relative order") {
        CorpusFilter filter;
        filter.task = TaskKind::CodeGen;
        const Corpus out = select(corpus, filter);
        REQUIRE(out.items.size() == 2);
        CHECK(out.items[0].id == "a1");
        CHECK(out.items[1].id == "a2");
    }
    SUBCASE("empty filter is the identity") {
        const Corpus out = select(corpus, {});
        REQUIRE(out.items.size() == corpus.items.size());
        for (size_t i = 0; i < out.items.size(); ++i) {
            CHECK(out.items[i].id == corpus.items[i].id);
        }
    }
    SUBCASE("difficulty=Hard finds exactly the TestGen/Hard item") {
        CorpusFilter filter;
        filter.difficulty = Difficulty::Hard;
        const Corpus out = select(corpus, filter);
        REQUIRE(out.items.size() == 1);
        CHECK(out.items[0].id == "h1");
    }
    SUBCASE("select is idempotent for a fixed filter") {
        CorpusFilter filter;
        filter.task = TaskKind::CodeGen;
        const Corpus once = select(corpus, filter);
        const Corpus twice = select(once, filter);
        REQUIRE(once.items.size() == twice.items.size());
        for (size_t i = 0; i < once.items.size(); ++i) {
            CHECK(once.items[i].id == twice.items[i].id);
        }
    }
    SUBCASE("missing filter ids are reported") {
        CorpusFilter filter;
        filter.ids = std::set<std::string>{"a1", "ghost", "phantom"};
        try {
            select(corpus, filter);
            FAIL("expected error");
        } catch (const Error& error) {
            CHECK(std::string(error.what()).find("ghost") != std::string::npos);
            CHECK(std::string(error.what()).find("phantom") != std::string::npos);
        }
    }
    SUBCASE("max_items is prefix truncation") {
        CorpusFilter filter;
        filter.max_items = 2;
        const Corpus out = select(corpus, filter);
        REQUIRE(out.items.size() == 2);
        CHECK(out.items[0].id == "a1");
        CHECK(out.items[1].id == "a2");
    }
}
