#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "judgeaudit/corpus.hpp"
#include "judgeaudit/store.hpp"

namespace judgeaudit {

// Task/difficulty attributes for the items a record set references; built
// from the corpus because records deliberately stay label-free.
struct ItemAttrs {
    TaskKind task = TaskKind::CodeGen;
    Difficulty difficulty = Difficulty::Easy;
};
using AttrMap = std::unordered_map<std::string, ItemAttrs>;

AttrMap attrs_of(const Corpus& corpus);

// Difficulty stratum of a table column; kStratumOverall pools all three.
inline constexpr int kStratumOverall = 3;
inline int stratum_index(Difficulty difficulty) { return static_cast<int>(difficulty); }
std::string_view stratum_label(int stratum);

// Accuracy conditions on answered records only; the planned count is always
// carried alongside so answer-rate distortion stays visible. Arithmetic is
// exact: accuracy is the ratio n_correct / n_answered.
struct AccuracyCell {
    int64_t n_planned = 0;  // records in scope, including errored calls
    int64_t n_answered = 0;
    int64_t n_correct = 0;

    bool has_accuracy() const { return n_answered > 0; }
    double accuracy() const;
    double accuracy_percent() const;

    AccuracyCell& operator+=(const AccuracyCell& other);
};

struct MetricScope {
    std::optional<TaskKind> task;
    std::optional<Difficulty> difficulty;
};

struct PresentationSet {
    bool gold_at_a = true;
    bool gold_at_b = true;

    bool includes(Presentation p) const {
        return p == Presentation::GoldAtA ? gold_at_a : gold_at_b;
    }
};

// Micro-accuracy for one bias condition over the (item x presentation) grid:
// correct / answered, counted over answered in-scope records of one run index.
AccuracyCell micro_accuracy(std::span<const RunRecord> records, const AttrMap& attrs,
                            BiasKind bias, const MetricScope& scope = {},
                            const PresentationSet& presentations = {},
                            int run_index = 1);

enum class Direction : uint8_t { Up, Down, Flat };

struct TableCell {
    AccuracyCell counts;
    std::optional<double> delta_pp;        // percentage points vs the no-bias cell
    std::optional<Direction> direction;    // sign of the delta, computed exactly
};

// Bias rows x (task x Easy/Medium/Hard/Overall) columns. Overall pools
// counts (micro averaging). gold_filter records which positional view this
// is when restricted to one gold placement.
struct MetricsTable {
    std::vector<BiasKind> biases;  // row order, no-bias first when present
    std::vector<TaskKind> tasks;
    std::map<std::tuple<TaskKind, int, BiasKind>, TableCell> cells;
    std::optional<Side> gold_filter;

    const TableCell* cell(TaskKind task, int stratum, BiasKind bias) const;
};

MetricsTable metrics_table(std::span<const RunRecord> records, const AttrMap& attrs,
                           int run_index = 1, const PresentationSet& presentations = {});

// The positional pair: accuracy when the gold candidate is shown first vs
// shown second.
std::pair<MetricsTable, MetricsTable> positional_tables(std::span<const RunRecord> records,
                                                        const AttrMap& attrs,
                                                        int run_index = 1);

// Fills delta and direction against the no-bias row of the same column.
// Directions are decided by exact integer cross-multiplication.
void bias_delta(MetricsTable& table);

// Test-retest agreement. Primary grouping is per (item, presentation) cell;
// the item-level grouping (all of an item's cells must agree) is reported
// alongside because either reading of a per-item consistency rate is
// defensible.
struct ConsistencyCell {
    int64_t n_pairs_total = 0;
    int64_t n_pairs_both_answered = 0;
    int64_t n_agree = 0;
    int64_t n_items_total = 0;
    int64_t n_items_both_answered = 0;
    int64_t n_items_agree = 0;

    std::optional<double> cr() const;
    std::optional<double> cr_items() const;
};

struct ConsistencyReport {
    std::vector<BiasKind> biases;
    std::vector<TaskKind> tasks;
    std::map<std::tuple<TaskKind, int, BiasKind>, ConsistencyCell> cells;

    const ConsistencyCell* cell(TaskKind task, int stratum, BiasKind bias) const;
};

ConsistencyReport consistency_rate(std::span<const RunRecord> run1,
                                   std::span<const RunRecord> run2, const AttrMap& attrs);

// Answered / planned with non-judgment reasons tallied separately. Errored
// calls are excluded from the denominator so that answered + non-judgment
// covers exactly the non-errored calls.
struct AnswerRateCell {
    int64_t n_total = 0;
    int64_t n_errored = 0;
    int64_t n_answered = 0;
    int64_t n_no_marker = 0;
    int64_t n_tie = 0;
    int64_t n_truncated = 0;

    int64_t denominator() const { return n_total - n_errored; }
    std::optional<double> rate() const;
    AnswerRateCell& operator+=(const AnswerRateCell& other);
};

struct AnswerRateReport {
    std::vector<BiasKind> biases;
    std::vector<TaskKind> tasks;
    std::vector<std::string> backends;
    std::map<std::tuple<TaskKind, BiasKind, std::string>, AnswerRateCell> cells;
    std::map<std::string, AnswerRateCell> per_backend_overall;
    AnswerRateCell overall;
};

AnswerRateReport answer_rate(std::span<const RunRecord> records, const AttrMap& attrs);

// Harness definition of the robustness rate: fraction of (item, presentation)
// cells whose verdict under the bias equals the verdict under no-bias, over
// cells answered in both conditions.
struct RobustnessCell {
    int64_t n_joint_answered = 0;
    int64_t n_agree = 0;
    std::optional<double> rate() const;
};

struct RobustnessReport {
    std::vector<BiasKind> biases; // injectable conditions present, no-bias excluded
    std::vector<TaskKind> tasks;
    std::map<std::pair<TaskKind, BiasKind>, RobustnessCell> cells;
    std::map<BiasKind, RobustnessCell> overall;
};

RobustnessReport robustness_rate(std::span<const RunRecord> records, const AttrMap& attrs,
                                 int run_index = 1);

RobustnessCell robustness_rate_cell(std::span<const RunRecord> records,
                                    const AttrMap& attrs, BiasKind bias,
                                    const MetricScope& scope = {}, int run_index = 1);

// Paired per-(item, presentation) deltas of the confidence placed on the
// gold-side choice letter: value when the verdict is the gold side, else its
// binary complement.
struct ConfidenceShiftPair {
    std::string item_id;
    Presentation presentation = Presentation::GoldAtA;
    double baseline = 0.0;
    double biased = 0.0;
    double delta = 0.0;
};

struct ConfidenceShiftReport {
    std::vector<ConfidenceShiftPair> pairs;
    bool no_confidence_data = false; // flagged when either side lacks confidences
    double mean_delta = 0.0;
    double min_delta = 0.0;
    double max_delta = 0.0;
};

ConfidenceShiftReport confidence_shift(std::span<const RunRecord> biased,
                                       std::span<const RunRecord> baseline,
                                       const MetricScope& scope, const AttrMap& attrs);

} // namespace judgeaudit
