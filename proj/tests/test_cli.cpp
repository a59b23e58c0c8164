#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "judgeaudit/cli.hpp"

using namespace judgeaudit;
using namespace judgeaudit::test;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("validate prints the stats block for the three-item corpus") {
    TempDir dir("cli");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const CliResult result = run_cli({"validate", "--corpus", dir.file("c.jsonl").string()});
    CHECK(result.code == 0);
    CHECK(result.out.find("items: 3") != std::string::npos);
    CHECK(result.out.find("CodeGen") != std::string::npos);
    CHECK(result.out.find("2 (100.0%)") != std::string::npos); // CodeGen Easy
    CHECK(result.out.find("1 (100.0%)") != std::string::npos); // TestGen Hard
}

TEST_CASE("validate surfaces corpus errors with the corpus exit code") {
    TempDir dir("cli");
    write_text(dir.file("bad.jsonl"), "{\"id\":\"x\"}\n");
    const CliResult result =
        run_cli({"validate", "--corpus", dir.file("bad.jsonl").string()});
    CHECK(result.code == 4);
    CHECK(result.err.find("error:") != std::string::npos);
    CHECK(result.out.empty());
}

TEST_CASE("show-prompt emits the assembled prompt on stdout") {
    TempDir dir("cli");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const CliResult result =
        run_cli({"show-prompt", "--corpus", dir.file("c.jsonl").string(), "--item", "a1",
                 "--bias", "no-bias"});
    CHECK(result.code == 0);
    CHECK(result.out.rfind("Please act as an impartial judge", 0) == 0);
    CHECK(result.out.find("<|The Start of Assistant A's Answer|>") != std::string::npos);
}

TEST_CASE("show-bias prints catalog texts") {
    const CliResult one = run_cli({"show-bias", "--bias", "Refined"});
    CHECK(one.code == 0);
    CHECK(one.out.find("A refined revision edited for clarity and correctness.") !=
          std::string::npos);

    const CliResult all = run_cli({"show-bias"});
    CHECK(all.code == 0);
    CHECK(all.out.find("== no-bias") != std::string::npos);
    CHECK(all.out.find("== Position") != std::string::npos);
    CHECK(all.out.find("realized via presentation axis") != std::string::npos);
}

TEST_CASE("run rejects consistency with a single repeat using the plan exit code") {
    TempDir dir("cli");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const CliResult result =
        run_cli({"run", "--corpus", dir.file("c.jsonl").string(), "--out",
                 dir.file("run").string(), "--repeats", "1", "--consistency"});
    CHECK(result.code == 5);
}

TEST_CASE("unknown commands and flags exit with the usage code") {
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"validate", "--no-such-flag"}).code == 2);
    CHECK(run_cli({}).code == 2);

    const CliResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
}

TEST_CASE("simulate runs end-to-end and leaves report artifacts") {
    TempDir dir("cli");
    const std::string run_dir = dir.file("sim").string();
    const CliResult result =
        run_cli({"simulate", "--profile", "oracle", "--items", "12", "--out", run_dir,
                 "--biases", "no-bias,authority", "--master-seed", "9"});
    REQUIRE(result.code == 0);
    CHECK(result.out.find("micro-accuracy") != std::string::npos);
    CHECK(result.out.find("100.00") != std::string::npos); // the oracle never misses
    for (const char* artifact :
         {"metadata.json", "records.jsonl", "manifest.json", "report.md", "report.csv",
          "metrics.json"}) {
        CHECK(std::filesystem::exists(dir.file("sim") / artifact));
    }

    SUBCASE("re-running without --resume refuses to touch the directory") {
        const CliResult again =
            run_cli({"simulate", "--profile", "oracle", "--items", "12", "--out", run_dir,
                     "--biases", "no-bias,authority", "--master-seed", "9"});
        CHECK(again.code == 6);
    }
    SUBCASE("re-running with --resume is a no-op that recomputes reports") {
        const CliResult resumed =
            run_cli({"simulate", "--profile", "oracle", "--items", "12", "--out", run_dir,
                     "--biases", "no-bias,authority", "--master-seed", "9", "--resume"});
        CHECK(resumed.code == 0);
        CHECK(resumed.err.find("skipped 96") != std::string::npos);
    }
    SUBCASE("metrics command emits parseable JSON for the run") {
        const CliResult metrics = run_cli({"metrics", "--run", run_dir});
        CHECK(metrics.code == 0);
        const nlohmann::json parsed = nlohmann::json::parse(metrics.out);
        CHECK(parsed.contains("pooled"));
    }
    SUBCASE("consistency command reports CR 1.0 for the deterministic oracle") {
        const CliResult consistency = run_cli({"consistency", "--run", run_dir});
        CHECK(consistency.code == 0);
        CHECK(consistency.out.find("100.00") != std::string::npos);
    }
    SUBCASE("report command renders markdown") {
        const CliResult report =
            run_cli({"report", "--run", run_dir, "--format", "markdown"});
        CHECK(report.code == 0);
        CHECK(report.out.find("| no-bias |") != std::string::npos);
    }
}

TEST_CASE("run executes against a real corpus file and resumes") {
    TempDir dir("cli");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    const std::string run_dir = dir.file("run").string();
    const CliResult first = run_cli({"run", "--corpus", dir.file("c.jsonl").string(),
                                     "--out", run_dir, "--backend", "sim:cue",
                                     "--biases", "no-bias", "--repeats", "2",
                                     "--consistency", "--max-calls", "5"});
    REQUIRE(first.code == 0);
    CHECK(first.err.find("executed 5") != std::string::npos);

    const CliResult blocked = run_cli({"run", "--corpus", dir.file("c.jsonl").string(),
                                       "--out", run_dir, "--backend", "sim:cue",
                                       "--biases", "no-bias", "--repeats", "2",
                                       "--consistency"});
    CHECK(blocked.code == 6);

    const CliResult resumed = run_cli({"run", "--corpus", dir.file("c.jsonl").string(),
                                       "--out", run_dir, "--backend", "sim:cue",
                                       "--biases", "no-bias", "--repeats", "2",
                                       "--consistency", "--resume"});
    CHECK(resumed.code == 0);
    CHECK(resumed.err.find("skipped 5") != std::string::npos);
    CHECK(resumed.err.find("executed 7") != std::string::npos);
}

TEST_CASE("run --manifest re-executes a simulated run identically") {
    TempDir dir("cli");
    const std::string first_dir = dir.file("first").string();
    REQUIRE(run_cli({"simulate", "--profile", "cue", "--items", "10", "--out", first_dir,
                     "--master-seed", "77"})
                .code == 0);

    const std::string second_dir = dir.file("second").string();
    const CliResult replay =
        run_cli({"run", "--manifest", (dir.file("first") / "manifest.json").string(),
                 "--out", second_dir});
    REQUIRE(replay.code == 0);
    CHECK(read_text(dir.file("first") / kRecordsFileName) ==
          read_text(dir.file("second") / kRecordsFileName));
}

TEST_CASE("config file values apply beneath explicit flags") {
    TempDir dir("cli");
    write_text(dir.file("c.jsonl"), three_item_corpus_text());
    nlohmann::json config;
    config["config_version"] = 1;
    config["biases"] = "no-bias,refined";
    config["repeats"] = 2;
    config["backend"] = "sim:coin";
    write_text(dir.file("cfg.json"), config.dump());

    const CliResult result = run_cli(
        {"run", "--corpus", dir.file("c.jsonl").string(), "--out", dir.file("r").string(),
         "--config", dir.file("cfg.json").string(), "--repeats", "3"});
    REQUIRE(result.code == 0);
    // flag wins over config: 3 repeats; config supplies biases and backend
    const std::string metadata = read_text(dir.file("r") / kMetadataFileName);
    const nlohmann::json plan = nlohmann::json::parse(metadata);
    CHECK(plan.at("repeats") == 3);
    CHECK(plan.at("biases").size() == 2);
    CHECK(plan.at("backend").get<std::string>().find("sim:coin") == 0);
}

TEST_CASE("stdout stays clean of diagnostics for report commands") {
    TempDir dir("cli");
    const std::string run_dir = dir.file("sim").string();
    REQUIRE(run_cli({"simulate", "--profile", "coin", "--items", "6", "--out", run_dir})
                .code == 0);
    const CliResult report = run_cli({"report", "--run", run_dir});
    CHECK(report.code == 0);
    CHECK(report.out.find("error") == std::string::npos);
    CHECK(report.out.find("run ") != 0);
}
