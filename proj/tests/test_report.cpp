#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "judgeaudit/hash.hpp"
#include "judgeaudit/report.hpp"

using namespace judgeaudit;
using namespace judgeaudit::test;

namespace {

MetricsTable fixture_table() {
    MetricsTable table;
    table.biases = {BiasKind::NoBias, BiasKind::Authority, BiasKind::Bandwagon};
    table.tasks = {TaskKind::CodeGen};
    auto put = [&](BiasKind bias, int stratum, int64_t correct) {
        TableCell cell;
        cell.counts.n_planned = 10000;
        cell.counts.n_answered = 10000;
        cell.counts.n_correct = correct;
        table.cells[{TaskKind::CodeGen, stratum, bias}] = cell;
    };
    for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
        put(BiasKind::NoBias, stratum, 6750);
        put(BiasKind::Authority, stratum, 7168);
        put(BiasKind::Bandwagon, stratum, 6130);
    }
    bias_delta(table);
    return table;
}

} // namespace

TEST_CASE("direction marks decorate the Overall column only") {
    const MetricsTable table = fixture_table();
    RenderSpec spec;
    spec.format = RenderFormat::Markdown;
    const std::string rendered = render_table(table, spec);

    CHECK(rendered.find("| 71.68 ^ |") != std::string::npos);
    CHECK(rendered.find("| 61.30 v |") != std::string::npos);
    // Easy/Medium/Hard columns carry bare numbers
    CHECK(rendered.find("| 71.68 |") != std::string::npos);
    // the baseline row never carries a mark
    CHECK(rendered.find("| 67.50 ^") == std::string::npos);
    CHECK(rendered.find("| 67.50 v") == std::string::npos);
    // no-bias renders first
    CHECK(rendered.find("no-bias") < rendered.find("Authority"));
}

TEST_CASE("rendering is deterministic and respects glyph configuration") {
    const MetricsTable table = fixture_table();
    RenderSpec spec;
    spec.up_glyph = "(+)";
    spec.down_glyph = "(-)";
    const std::string once = render_table(table, spec);
    const std::string twice = render_table(table, spec);
    CHECK(once == twice);
    CHECK(once.find("71.68 (+)") != std::string::npos);
    CHECK(once.find("61.30 (-)") != std::string::npos);
}

TEST_CASE("csv output uses signed deltas instead of glyphs") {
    const MetricsTable table = fixture_table();
    RenderSpec spec;
    spec.format = RenderFormat::CommaSeparated;
    const std::string rendered = render_table(table, spec);
    CHECK(rendered.find("CodeGen Overall delta") != std::string::npos);
    CHECK(rendered.find("+4.18") != std::string::npos);
    CHECK(rendered.find("-6.20") != std::string::npos);
    CHECK(rendered.find("71.68 ^") == std::string::npos);
    CHECK(rendered.find("61.30 v") == std::string::npos);
}

TEST_CASE("a single-cell table round-trips through its rendering") {
    MetricsTable table;
    table.biases = {BiasKind::NoBias};
    table.tasks = {TaskKind::TestGen};
    TableCell cell;
    cell.counts.n_planned = 840;
    cell.counts.n_answered = 840;
    cell.counts.n_correct = 491;
    table.cells[{TaskKind::TestGen, kStratumOverall, BiasKind::NoBias}] = cell;

    RenderSpec spec;
    spec.format = RenderFormat::CommaSeparated;
    const std::string rendered = render_table(table, spec);

    std::istringstream in(rendered);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(header.find("TestGen Overall") != std::string::npos);

    auto fields = [](const std::string& line) {
        std::vector<std::string> out;
        std::istringstream stream(line);
        std::string field;
        while (std::getline(stream, field, ',')) out.push_back(field);
        return out;
    };
    const auto header_fields = fields(header);
    const auto row_fields = fields(row);
    size_t overall_column = 0;
    for (size_t i = 0; i < header_fields.size(); ++i) {
        if (header_fields[i] == "TestGen Overall") overall_column = i;
    }
    REQUIRE(overall_column > 0);
    const double printed = std::stod(row_fields.at(overall_column));
    CHECK(std::abs(printed - cell.counts.accuracy_percent()) <= 0.005);
}

TEST_CASE("printed numbers re-parse within half a printed ulp") {
    SplitMix64 stream(55);
    for (int round = 0; round < 200; ++round) {
        const double value = 100.0 * stream.next_double();
        for (int decimals : {0, 1, 2, 4}) {
            char buffer[64];
            std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
            const double reparsed = std::stod(buffer);
            CHECK(std::abs(reparsed - value) <= 0.5 * std::pow(10.0, -decimals) + 1e-12);
        }
    }
}

TEST_CASE("include_counts surfaces answered denominators") {
    const MetricsTable table = fixture_table();
    RenderSpec spec;
    spec.include_counts = true;
    const std::string rendered = render_table(table, spec);
    CHECK(rendered.find("(n=10000)") != std::string::npos);
}

TEST_CASE("analysis rendering stitches every section") {
    const Corpus corpus = make_synthetic_corpus(24, 44);
    const RunPlan plan = small_plan("synthetic:24:44",
                                    {BiasKind::NoBias, BiasKind::Verbosity}, 2, 44);
    auto judge = make_sim_judge(named_profile("cue"), 44);
    TempDir dir("analysis");
    RunStore store(dir.file("run"), plan_to_json(plan));
    execute(plan, corpus, *judge, store);

    const auto records = RunStore::read_records(dir.file("run"));
    const AttrMap attrs = attrs_of(corpus);
    const RunAnalysis analysis = analyze_run(records, attrs);
    REQUIRE(analysis.consistency.has_value());
    REQUIRE(analysis.robustness.has_value());

    RenderSpec spec;
    const std::string rendered = render_analysis(analysis, spec);
    CHECK(rendered.find("micro-accuracy, both presentations pooled") != std::string::npos);
    CHECK(rendered.find("gold candidate shown at A") != std::string::npos);
    CHECK(rendered.find("gold candidate shown at B") != std::string::npos);
    CHECK(rendered.find("answer rate") != std::string::npos);
    CHECK(rendered.find("consistency rate, per (item, presentation) cell") !=
          std::string::npos);
    CHECK(rendered.find("consistency rate, per item") != std::string::npos);
    CHECK(rendered.find(kRobustnessDefinition) != std::string::npos);

    const std::string document = metrics_json(analysis);
    const nlohmann::json parsed = nlohmann::json::parse(document);
    CHECK(parsed.contains("pooled"));
    CHECK(parsed.contains("gold_at_a"));
    CHECK(parsed.contains("consistency"));
    CHECK(parsed.at("robustness").at("definition").get<std::string>() ==
          kRobustnessDefinition);
}

TEST_CASE("manifest records the reproducibility fields and re-executes identically") {
    const Corpus corpus = make_synthetic_corpus(6, 77);
    RunPlan plan = small_plan("synthetic:6:77", {BiasKind::NoBias}, 1, 77);
    plan.injection_mode = InjectionMode::Inline;
    plan = plan_run(std::move(plan));

    auto judge = make_sim_judge(named_profile("cue"), 77);
    TempDir dir("manifest");
    RunStore store(dir.file("one"), plan_to_json(plan));
    const RunSummary summary = execute(plan, corpus, *judge, store);

    const std::string manifest = export_manifest(plan, summary);
    const nlohmann::json parsed = nlohmann::json::parse(manifest);
    CHECK(parsed.at("injection_mode") == "Inline");
    CHECK(parsed.at("alias_orig") == "GoldAtA");
    CHECK(parsed.at("master_seed") == 77);
    CHECK(parsed.at("outcome").at("planned") == summary.planned);

    // the manifest alone suffices to re-execute the identical plan
    const RunPlan replayed = plan_from_json(manifest);
    const Corpus corpus2 = corpus_for_plan(replayed);
    auto judge2 = make_sim_judge(named_profile("cue"), replayed.master_seed);
    RunStore store2(dir.file("two"), plan_to_json(replayed));
    execute(replayed, corpus2, *judge2, store2);

    CHECK(read_text(dir.file("one") / kRecordsFileName) ==
          read_text(dir.file("two") / kRecordsFileName));
}
