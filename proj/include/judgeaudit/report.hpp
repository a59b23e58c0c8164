#pragma once

#include <optional>
#include <string>

#include "judgeaudit/metrics.hpp"
#include "judgeaudit/runner.hpp"

namespace judgeaudit {

enum class RenderFormat : uint8_t { PlainText, CommaSeparated, Markdown };

std::optional<RenderFormat> parse_render_format(std::string_view text);

// Direction glyphs are configurable strings; CSV ignores them and emits
// signed delta columns instead.
struct RenderSpec {
    RenderFormat format = RenderFormat::PlainText;
    int decimals = 2;
    std::string up_glyph = "^";
    std::string down_glyph = "v";
    std::string flat_glyph = "=";
    bool include_counts = false;
};

// One row per bias with no-bias first; columns grouped per task as
// Easy/Medium/Hard/Overall; the Overall column carries the direction mark
// against the no-bias row. Byte-deterministic for a fixed (table, spec).
std::string render_table(const MetricsTable& table, const RenderSpec& spec);
std::string render_table(const ConsistencyReport& report, const RenderSpec& spec);
std::string render_table(const AnswerRateReport& report, const RenderSpec& spec);
std::string render_table(const RobustnessReport& report, const RenderSpec& spec);

std::string render_stats(const StatsTable& stats, const RenderSpec& spec);

// Everything derived from one run's record set.
struct RunAnalysis {
    MetricsTable pooled;     // Eq-style both-presentation view, deltas filled
    MetricsTable gold_at_a;  // positional views, deltas filled
    MetricsTable gold_at_b;
    AnswerRateReport answer_rates;
    std::optional<ConsistencyReport> consistency; // when a second run exists
    std::optional<RobustnessReport> robustness;   // when no-bias plus cues exist
    // per-bias gold-side confidence deltas vs no-bias, when confidences exist
    std::map<BiasKind, ConfidenceShiftReport> confidence_shifts;
};

RunAnalysis analyze_run(std::span<const RunRecord> records, const AttrMap& attrs,
                        int run_index = 1, int second_run_index = 2);

// Full human-readable report (all sections, one RenderSpec).
std::string render_analysis(const RunAnalysis& analysis, const RenderSpec& spec);

// Machine-readable document with every cell's exact counts.
std::string metrics_json(const RunAnalysis& analysis);

// Reproducibility sidecar: the effective plan plus outcome counts; enough to
// re-execute the identical run. Never contains auth material.
std::string export_manifest(const RunPlan& plan, const RunSummary& summary);

inline constexpr const char* kRobustnessDefinition =
    "robustness rate (harness definition): verdict agreement with the no-bias "
    "condition over cells answered in both";

} // namespace judgeaudit
