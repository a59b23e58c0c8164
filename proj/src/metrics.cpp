#include "judgeaudit/metrics.hpp"

#include <algorithm>
#include <set>

namespace judgeaudit {

namespace {

const ItemAttrs& attrs_for(const AttrMap& attrs, const std::string& item_id) {
    auto it = attrs.find(item_id);
    if (it == attrs.end()) {
        throw Error(ErrorKind::Metrics,
                    "record references item '" + item_id + "' absent from the corpus");
    }
    return it->second;
}

bool in_scope(const ItemAttrs& attrs, const MetricScope& scope) {
    if (scope.task && attrs.task != *scope.task) return false;
    if (scope.difficulty && attrs.difficulty != *scope.difficulty) return false;
    return true;
}

template <typename T>
void sort_enum_order(std::vector<T>& values) {
    std::sort(values.begin(), values.end(),
              [](T a, T b) { return static_cast<int>(a) < static_cast<int>(b); });
}

std::vector<BiasKind> collect_biases(std::span<const RunRecord> records) {
    std::set<BiasKind> seen;
    for (const RunRecord& record : records) seen.insert(record.condition.bias);
    std::vector<BiasKind> biases(seen.begin(), seen.end());
    sort_enum_order(biases); // NoBias is the lowest enumerator, so it leads
    return biases;
}

std::vector<TaskKind> collect_tasks(std::span<const RunRecord> records,
                                    const AttrMap& attrs) {
    std::set<TaskKind> seen;
    for (const RunRecord& record : records) seen.insert(attrs_for(attrs, record.item_id).task);
    std::vector<TaskKind> tasks(seen.begin(), seen.end());
    sort_enum_order(tasks);
    return tasks;
}

} // namespace

AttrMap attrs_of(const Corpus& corpus) {
    AttrMap attrs;
    attrs.reserve(corpus.items.size());
    for (const EvalItem& item : corpus.items) {
        attrs[item.id] = ItemAttrs{item.task, item.difficulty};
    }
    return attrs;
}

std::string_view stratum_label(int stratum) {
    switch (stratum) {
        case 0: return "Easy";
        case 1: return "Medium";
        case 2: return "Hard";
        case kStratumOverall: return "Overall";
    }
    return "?";
}

double AccuracyCell::accuracy() const {
    if (n_answered == 0) {
        throw Error(ErrorKind::Metrics, "accuracy undefined: no answered records");
    }
    return static_cast<double>(n_correct) / static_cast<double>(n_answered);
}

double AccuracyCell::accuracy_percent() const { return 100.0 * accuracy(); }

AccuracyCell& AccuracyCell::operator+=(const AccuracyCell& other) {
    n_planned += other.n_planned;
    n_answered += other.n_answered;
    n_correct += other.n_correct;
    return *this;
}

AccuracyCell micro_accuracy(std::span<const RunRecord> records, const AttrMap& attrs,
                            BiasKind bias, const MetricScope& scope,
                            const PresentationSet& presentations, int run_index) {
    AccuracyCell cell;
    for (const RunRecord& record : records) {
        if (record.condition.run_index != run_index) continue;
        if (record.condition.bias != bias) continue;
        if (!presentations.includes(record.condition.presentation)) continue;
        if (!in_scope(attrs_for(attrs, record.item_id), scope)) continue;
        ++cell.n_planned;
        if (record.error) continue;
        if (!record.parse.answered()) continue;
        ++cell.n_answered;
        if (record.pred && *record.pred == record.gold_position) ++cell.n_correct;
    }
    return cell;
}

const TableCell* MetricsTable::cell(TaskKind task, int stratum, BiasKind bias) const {
    auto it = cells.find({task, stratum, bias});
    return it == cells.end() ? nullptr : &it->second;
}

MetricsTable metrics_table(std::span<const RunRecord> records, const AttrMap& attrs,
                           int run_index, const PresentationSet& presentations) {
    MetricsTable table;
    table.biases = collect_biases(records);
    table.tasks = collect_tasks(records, attrs);
    if (!presentations.gold_at_a && presentations.gold_at_b) table.gold_filter = Side::B;
    if (presentations.gold_at_a && !presentations.gold_at_b) table.gold_filter = Side::A;

    for (const RunRecord& record : records) {
        if (record.condition.run_index != run_index) continue;
        if (!presentations.includes(record.condition.presentation)) continue;
        const ItemAttrs& item = attrs_for(attrs, record.item_id);

        AccuracyCell delta;
        delta.n_planned = 1;
        if (!record.error && record.parse.answered()) {
            delta.n_answered = 1;
            if (record.pred && *record.pred == record.gold_position) delta.n_correct = 1;
        }
        const BiasKind bias = record.condition.bias;
        table.cells[{item.task, stratum_index(item.difficulty), bias}].counts += delta;
        table.cells[{item.task, kStratumOverall, bias}].counts += delta;
    }
    return table;
}

std::pair<MetricsTable, MetricsTable> positional_tables(std::span<const RunRecord> records,
                                                        const AttrMap& attrs,
                                                        int run_index) {
    PresentationSet only_a{true, false};
    PresentationSet only_b{false, true};
    return {metrics_table(records, attrs, run_index, only_a),
            metrics_table(records, attrs, run_index, only_b)};
}

void bias_delta(MetricsTable& table) {
    const bool has_baseline =
        std::find(table.biases.begin(), table.biases.end(), BiasKind::NoBias) !=
        table.biases.end();
    if (!has_baseline) {
        throw Error(ErrorKind::Metrics, "metrics table has no no-bias row to delta against");
    }

    for (auto& [key, cell] : table.cells) {
        const auto& [task, stratum, bias] = key;
        if (bias == BiasKind::NoBias) continue;
        const TableCell* baseline = table.cell(task, stratum, BiasKind::NoBias);
        if (baseline == nullptr || !baseline->counts.has_accuracy() ||
            !cell.counts.has_accuracy()) {
            continue;
        }
        cell.delta_pp = cell.counts.accuracy_percent() - baseline->counts.accuracy_percent();
        // Exact sign: c1/a1 vs c0/a0  <=>  c1*a0 vs c0*a1.
        const __int128 lhs = static_cast<__int128>(cell.counts.n_correct) *
                             baseline->counts.n_answered;
        const __int128 rhs = static_cast<__int128>(baseline->counts.n_correct) *
                             cell.counts.n_answered;
        cell.direction = lhs > rhs   ? Direction::Up
                         : lhs < rhs ? Direction::Down
                                     : Direction::Flat;
    }
}

std::optional<double> ConsistencyCell::cr() const {
    if (n_pairs_both_answered == 0) return std::nullopt;
    return static_cast<double>(n_agree) / static_cast<double>(n_pairs_both_answered);
}

std::optional<double> ConsistencyCell::cr_items() const {
    if (n_items_both_answered == 0) return std::nullopt;
    return static_cast<double>(n_items_agree) / static_cast<double>(n_items_both_answered);
}

const ConsistencyCell* ConsistencyReport::cell(TaskKind task, int stratum,
                                               BiasKind bias) const {
    auto it = cells.find({task, stratum, bias});
    return it == cells.end() ? nullptr : &it->second;
}

ConsistencyReport consistency_rate(std::span<const RunRecord> run1,
                                   std::span<const RunRecord> run2,
                                   const AttrMap& attrs) {
    // Cell key ignoring the run index.
    auto cell_key = [](const RunRecord& record) {
        return record.item_id + "|" + std::string(to_label(record.condition.bias)) + "|" +
               std::string(to_label(record.condition.presentation)) + "|" +
               std::string(to_label(record.condition.injection_mode));
    };

    std::map<std::string, const RunRecord*> second;
    for (const RunRecord& record : run2) second[cell_key(record)] = &record;
    std::set<std::string> first_keys;
    for (const RunRecord& record : run1) first_keys.insert(cell_key(record));
    if (second.size() != run2.size() || first_keys.size() != run1.size() ||
        run1.size() != run2.size()) {
        throw Error(ErrorKind::Metrics, "consistency: mismatched grids between runs");
    }

    ConsistencyReport report;
    report.biases = collect_biases(run1);
    report.tasks = collect_tasks(run1, attrs);

    struct ItemAgg {
        int64_t cells = 0;
        int64_t both = 0;
        int64_t agree = 0;
    };
    std::map<std::tuple<TaskKind, BiasKind, std::string>, ItemAgg> per_item;

    for (const RunRecord& first : run1) {
        auto match = second.find(cell_key(first));
        if (match == second.end()) {
            throw Error(ErrorKind::Metrics, "consistency: mismatched grids between runs");
        }
        const RunRecord& other = *match->second;
        const ItemAttrs& item = attrs_for(attrs, first.item_id);
        const BiasKind bias = first.condition.bias;

        const bool both_answered = first.parse.answered() && other.parse.answered();
        const bool agree =
            both_answered && first.parse.verdict() == other.parse.verdict();

        for (int stratum : {stratum_index(item.difficulty), kStratumOverall}) {
            ConsistencyCell& cell = report.cells[{item.task, stratum, bias}];
            ++cell.n_pairs_total;
            if (both_answered) {
                ++cell.n_pairs_both_answered;
                if (agree) ++cell.n_agree;
            }
        }
        ItemAgg& agg = per_item[{item.task, bias, first.item_id}];
        ++agg.cells;
        if (both_answered) {
            ++agg.both;
            if (agree) ++agg.agree;
        }
    }

    for (const auto& [key, agg] : per_item) {
        const auto& [task, bias, item_id] = key;
        const ItemAttrs& item = attrs_for(attrs, item_id);
        for (int stratum : {stratum_index(item.difficulty), kStratumOverall}) {
            ConsistencyCell& cell = report.cells[{task, stratum, bias}];
            ++cell.n_items_total;
            if (agg.both == agg.cells) {
                ++cell.n_items_both_answered;
                if (agg.agree == agg.cells) ++cell.n_items_agree;
            }
        }
    }
    return report;
}

std::optional<double> AnswerRateCell::rate() const {
    if (denominator() == 0) return std::nullopt;
    return static_cast<double>(n_answered) / static_cast<double>(denominator());
}

AnswerRateCell& AnswerRateCell::operator+=(const AnswerRateCell& other) {
    n_total += other.n_total;
    n_errored += other.n_errored;
    n_answered += other.n_answered;
    n_no_marker += other.n_no_marker;
    n_tie += other.n_tie;
    n_truncated += other.n_truncated;
    return *this;
}

AnswerRateReport answer_rate(std::span<const RunRecord> records, const AttrMap& attrs) {
    AnswerRateReport report;
    report.biases = collect_biases(records);
    report.tasks = collect_tasks(records, attrs);

    std::set<std::string> backends;
    for (const RunRecord& record : records) {
        const ItemAttrs& item = attrs_for(attrs, record.item_id);
        backends.insert(record.backend_id);

        AnswerRateCell delta;
        delta.n_total = 1;
        if (record.error) {
            delta.n_errored = 1;
        } else if (record.parse.answered()) {
            delta.n_answered = 1;
        } else {
            switch (record.parse.reason()) {
                case NonJudgmentReason::NoMarker: delta.n_no_marker = 1; break;
                case NonJudgmentReason::TieMarker: delta.n_tie = 1; break;
                case NonJudgmentReason::Truncated: delta.n_truncated = 1; break;
            }
        }

        report.cells[{item.task, record.condition.bias, record.backend_id}] += delta;
        report.per_backend_overall[record.backend_id] += delta;
        report.overall += delta;
    }
    report.backends.assign(backends.begin(), backends.end());
    return report;
}

std::optional<double> RobustnessCell::rate() const {
    if (n_joint_answered == 0) return std::nullopt;
    return static_cast<double>(n_agree) / static_cast<double>(n_joint_answered);
}

namespace {

// verdict by (item, presentation) for one bias condition
std::map<std::pair<std::string, Presentation>, Side> answered_verdicts(
    std::span<const RunRecord> records, const AttrMap& attrs, BiasKind bias,
    const MetricScope& scope, int run_index, bool* condition_seen) {
    std::map<std::pair<std::string, Presentation>, Side> verdicts;
    for (const RunRecord& record : records) {
        if (record.condition.run_index != run_index) continue;
        if (record.condition.bias != bias) continue;
        if (!in_scope(attrs_for(attrs, record.item_id), scope)) continue;
        if (condition_seen) *condition_seen = true;
        if (!record.parse.answered()) continue;
        verdicts[{record.item_id, record.condition.presentation}] =
            record.parse.verdict();
    }
    return verdicts;
}

} // namespace

RobustnessCell robustness_rate_cell(std::span<const RunRecord> records,
                                    const AttrMap& attrs, BiasKind bias,
                                    const MetricScope& scope, int run_index) {
    if (bias == BiasKind::NoBias) {
        throw Error(ErrorKind::Metrics, "robustness rate is relative to no-bias itself");
    }
    bool baseline_seen = false;
    bool bias_seen = false;
    const auto baseline = answered_verdicts(records, attrs, BiasKind::NoBias, scope,
                                            run_index, &baseline_seen);
    const auto biased =
        answered_verdicts(records, attrs, bias, scope, run_index, &bias_seen);
    if (!baseline_seen) {
        throw Error(ErrorKind::Metrics,
                    "robustness rate needs the no-bias condition in the record set");
    }
    if (!bias_seen) {
        throw Error(ErrorKind::Metrics,
                    std::string("robustness rate: no records for condition ") +
                        std::string(to_label(bias)));
    }

    RobustnessCell cell;
    for (const auto& [key, verdict] : biased) {
        auto base = baseline.find(key);
        if (base == baseline.end()) continue;
        ++cell.n_joint_answered;
        if (base->second == verdict) ++cell.n_agree;
    }
    return cell;
}

RobustnessReport robustness_rate(std::span<const RunRecord> records, const AttrMap& attrs,
                                 int run_index) {
    RobustnessReport report;
    report.tasks = collect_tasks(records, attrs);
    for (BiasKind bias : collect_biases(records)) {
        if (bias == BiasKind::NoBias) continue;
        report.biases.push_back(bias);
        report.overall[bias] = robustness_rate_cell(records, attrs, bias, {}, run_index);
        for (TaskKind task : report.tasks) {
            MetricScope scope;
            scope.task = task;
            report.cells[{task, bias}] =
                robustness_rate_cell(records, attrs, bias, scope, run_index);
        }
    }
    return report;
}

ConfidenceShiftReport confidence_shift(std::span<const RunRecord> biased,
                                       std::span<const RunRecord> baseline,
                                       const MetricScope& scope, const AttrMap& attrs) {
    // Confidence on the gold-side letter: the recorded decision confidence
    // when the verdict is the gold side, else its binary complement.
    auto gold_confidence = [](const RunRecord& record) -> std::optional<double> {
        if (!record.parse.answered() || !record.decision_confidence) return std::nullopt;
        if (*record.pred == record.gold_position) return *record.decision_confidence;
        return 1.0 - *record.decision_confidence;
    };

    std::map<std::pair<std::string, Presentation>, double> base;
    bool any_base_confidence = false;
    for (const RunRecord& record : baseline) {
        if (!in_scope(attrs_for(attrs, record.item_id), scope)) continue;
        if (auto value = gold_confidence(record)) {
            base[{record.item_id, record.condition.presentation}] = *value;
            any_base_confidence = true;
        }
    }

    ConfidenceShiftReport report;
    bool any_biased_confidence = false;
    for (const RunRecord& record : biased) {
        if (!in_scope(attrs_for(attrs, record.item_id), scope)) continue;
        const auto value = gold_confidence(record);
        if (!value) continue;
        any_biased_confidence = true;
        auto match = base.find({record.item_id, record.condition.presentation});
        if (match == base.end()) continue;
        ConfidenceShiftPair pair;
        pair.item_id = record.item_id;
        pair.presentation = record.condition.presentation;
        pair.baseline = match->second;
        pair.biased = *value;
        pair.delta = pair.biased - pair.baseline;
        report.pairs.push_back(std::move(pair));
    }

    report.no_confidence_data = !any_base_confidence || !any_biased_confidence;
    if (!report.pairs.empty()) {
        double sum = 0.0;
        report.min_delta = report.pairs.front().delta;
        report.max_delta = report.pairs.front().delta;
        for (const ConfidenceShiftPair& pair : report.pairs) {
            sum += pair.delta;
            report.min_delta = std::min(report.min_delta, pair.delta);
            report.max_delta = std::max(report.max_delta, pair.delta);
        }
        report.mean_delta = sum / static_cast<double>(report.pairs.size());
    }
    return report;
}

} // namespace judgeaudit
