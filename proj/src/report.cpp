#include "judgeaudit/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace judgeaudit {

namespace {

using nlohmann::json;

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

std::string signed_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%+.*f", decimals, value);
    return buffer;
}

// Row-major grid rendered as plain text (width-padded), CSV, or markdown.
class Grid {
public:
    explicit Grid(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render(RenderFormat format) const {
        switch (format) {
            case RenderFormat::CommaSeparated: return render_csv();
            case RenderFormat::Markdown: return render_markdown();
            case RenderFormat::PlainText: return render_plain();
        }
        return {};
    }

private:
    static std::string csv_escape(const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    std::string render_csv() const {
        std::string out;
        for (const auto& row : rows_) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += csv_escape(row[i]);
            }
            out += '\n';
        }
        return out;
    }

    std::string render_markdown() const {
        std::string out;
        for (size_t r = 0; r < rows_.size(); ++r) {
            out += '|';
            for (const auto& cell : rows_[r]) {
                out += ' ';
                out += cell.empty() ? std::string{"-"} : cell;
                out += " |";
            }
            out += '\n';
            if (r == 0) {
                out += '|';
                for (size_t i = 0; i < rows_[0].size(); ++i) out += "---|";
                out += '\n';
            }
        }
        return out;
    }

    std::string render_plain() const {
        std::vector<size_t> widths;
        for (const auto& row : rows_) {
            if (widths.size() < row.size()) widths.resize(row.size(), 0);
            for (size_t i = 0; i < row.size(); ++i) {
                widths[i] = std::max(widths[i], row[i].size());
            }
        }
        std::string out;
        for (const auto& row : rows_) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += "  ";
                out += row[i];
                if (i + 1 < row.size()) {
                    out.append(widths[i] - row[i].size(), ' ');
                }
            }
            out += '\n';
        }
        return out;
    }

    std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> task_stratum_header(const std::vector<TaskKind>& tasks) {
    std::vector<std::string> header{"Bias"};
    for (TaskKind task : tasks) {
        for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
            header.push_back(std::string(to_label(task)) + " " +
                             std::string(stratum_label(stratum)));
        }
    }
    return header;
}

const std::string& glyph_for(Direction direction, const RenderSpec& spec) {
    switch (direction) {
        case Direction::Up: return spec.up_glyph;
        case Direction::Down: return spec.down_glyph;
        case Direction::Flat: return spec.flat_glyph;
    }
    return spec.flat_glyph;
}

} // namespace

std::optional<RenderFormat> parse_render_format(std::string_view text) {
    if (text == "plain" || text == "text") return RenderFormat::PlainText;
    if (text == "csv") return RenderFormat::CommaSeparated;
    if (text == "markdown" || text == "md") return RenderFormat::Markdown;
    return std::nullopt;
}

std::string render_table(const MetricsTable& table, const RenderSpec& spec) {
    const bool csv = spec.format == RenderFormat::CommaSeparated;

    std::vector<std::string> header = task_stratum_header(table.tasks);
    if (csv) {
        for (TaskKind task : table.tasks) {
            header.push_back(std::string(to_label(task)) + " Overall delta");
        }
    }
    if (csv && spec.include_counts) {
        for (TaskKind task : table.tasks) {
            for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
                header.push_back(std::string(to_label(task)) + " " +
                                 std::string(stratum_label(stratum)) + " n");
            }
        }
    }
    Grid grid(std::move(header));

    for (BiasKind bias : table.biases) {
        std::vector<std::string> row{std::string(to_label(bias))};
        for (TaskKind task : table.tasks) {
            for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
                const TableCell* cell = table.cell(task, stratum, bias);
                std::string text;
                if (cell != nullptr && cell->counts.has_accuracy()) {
                    text = fixed(cell->counts.accuracy_percent(), spec.decimals);
                    if (!csv && stratum == kStratumOverall && cell->direction) {
                        text += " " + glyph_for(*cell->direction, spec);
                    }
                    if (!csv && spec.include_counts) {
                        text += " (n=" + std::to_string(cell->counts.n_answered) + ")";
                    }
                }
                row.push_back(std::move(text));
            }
        }
        if (csv) {
            for (TaskKind task : table.tasks) {
                const TableCell* cell = table.cell(task, kStratumOverall, bias);
                row.push_back(cell != nullptr && cell->delta_pp
                                  ? signed_fixed(*cell->delta_pp, spec.decimals)
                                  : std::string{});
            }
            if (spec.include_counts) {
                for (TaskKind task : table.tasks) {
                    for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
                        const TableCell* cell = table.cell(task, stratum, bias);
                        row.push_back(cell != nullptr
                                          ? std::to_string(cell->counts.n_answered)
                                          : std::string{});
                    }
                }
            }
        }
        grid.add_row(std::move(row));
    }
    return grid.render(spec.format);
}

std::string render_table(const ConsistencyReport& report, const RenderSpec& spec) {
    std::string out;
    for (const bool per_item : {false, true}) {
        Grid grid(task_stratum_header(report.tasks));
        for (BiasKind bias : report.biases) {
            std::vector<std::string> row{std::string(to_label(bias))};
            for (TaskKind task : report.tasks) {
                for (int stratum = 0; stratum <= kStratumOverall; ++stratum) {
                    const ConsistencyCell* cell = report.cell(task, stratum, bias);
                    std::string text;
                    if (cell != nullptr) {
                        const auto cr = per_item ? cell->cr_items() : cell->cr();
                        if (cr) {
                            text = fixed(100.0 * *cr, spec.decimals);
                            if (spec.include_counts &&
                                spec.format != RenderFormat::CommaSeparated) {
                                const int64_t joint = per_item
                                                          ? cell->n_items_both_answered
                                                          : cell->n_pairs_both_answered;
                                const int64_t total =
                                    per_item ? cell->n_items_total : cell->n_pairs_total;
                                text += " (" + std::to_string(joint) + "/" +
                                        std::to_string(total) + ")";
                            }
                        }
                    }
                    row.push_back(std::move(text));
                }
            }
            grid.add_row(std::move(row));
        }
        out += per_item ? "# consistency rate, per item (presentations pooled)\n"
                        : "# consistency rate, per (item, presentation) cell\n";
        out += grid.render(spec.format);
        if (!per_item) out += "\n";
    }
    return out;
}

std::string render_table(const AnswerRateReport& report, const RenderSpec& spec) {
    std::string out;
    for (const std::string& backend : report.backends) {
        Grid grid([&] {
            std::vector<std::string> header{"Bias"};
            for (TaskKind task : report.tasks) header.emplace_back(to_label(task));
            header.emplace_back("Overall");
            return header;
        }());

        for (BiasKind bias : report.biases) {
            std::vector<std::string> row{std::string(to_label(bias))};
            AnswerRateCell pooled;
            for (TaskKind task : report.tasks) {
                auto it = report.cells.find({task, bias, backend});
                std::string text;
                if (it != report.cells.end()) {
                    pooled += it->second;
                    if (auto rate = it->second.rate()) {
                        text = fixed(100.0 * *rate, spec.decimals);
                        if (spec.include_counts &&
                            spec.format != RenderFormat::CommaSeparated) {
                            text += " (" + std::to_string(it->second.n_answered) + "/" +
                                    std::to_string(it->second.denominator()) + ")";
                        }
                    }
                }
                row.push_back(std::move(text));
            }
            row.push_back(pooled.rate() ? fixed(100.0 * *pooled.rate(), spec.decimals)
                                        : std::string{});
            grid.add_row(std::move(row));
        }
        out += "# answer rate, backend " + backend + "\n";
        out += grid.render(spec.format);
    }
    return out;
}

std::string render_table(const RobustnessReport& report, const RenderSpec& spec) {
    Grid grid([&] {
        std::vector<std::string> header{"Bias"};
        for (TaskKind task : report.tasks) header.emplace_back(to_label(task));
        header.emplace_back("Overall");
        return header;
    }());

    for (BiasKind bias : report.biases) {
        std::vector<std::string> row{std::string(to_label(bias))};
        for (TaskKind task : report.tasks) {
            auto it = report.cells.find({task, bias});
            std::string text;
            if (it != report.cells.end()) {
                if (auto rate = it->second.rate()) {
                    text = fixed(100.0 * *rate, spec.decimals);
                    if (spec.include_counts && spec.format != RenderFormat::CommaSeparated) {
                        text += " (" + std::to_string(it->second.n_agree) + "/" +
                                std::to_string(it->second.n_joint_answered) + ")";
                    }
                }
            }
            row.push_back(std::move(text));
        }
        auto overall = report.overall.find(bias);
        row.push_back(overall != report.overall.end() && overall->second.rate()
                          ? fixed(100.0 * *overall->second.rate(), spec.decimals)
                          : std::string{});
        grid.add_row(std::move(row));
    }
    return "# " + std::string(kRobustnessDefinition) + "\n" + grid.render(spec.format);
}

std::string render_stats(const StatsTable& stats, const RenderSpec& spec) {
    Grid grid({"Task", "Easy", "Medium", "Hard", "Total", "Corpus Share"});
    static constexpr TaskKind kTasks[] = {TaskKind::CodeGen, TaskKind::CodeRepair,
                                          TaskKind::TestGen};
    static constexpr Difficulty kLevels[] = {Difficulty::Easy, Difficulty::Medium,
                                             Difficulty::Hard};
    for (TaskKind task : kTasks) {
        std::vector<std::string> row{std::string(to_label(task))};
        for (Difficulty level : kLevels) {
            std::string text = std::to_string(stats.count(task, level));
            text += " (" + fixed(stats.in_task_share(task, level), 1) + "%)";
            row.push_back(std::move(text));
        }
        auto total = stats.task_totals.find(task);
        row.push_back(std::to_string(total == stats.task_totals.end() ? 0 : total->second));
        row.push_back(fixed(stats.corpus_share(task), spec.decimals) + "%");
        grid.add_row(std::move(row));
    }
    grid.add_row({"All Tasks", "", "", "", std::to_string(stats.total), "100%"});
    return grid.render(spec.format);
}

RunAnalysis analyze_run(std::span<const RunRecord> records, const AttrMap& attrs,
                        int run_index, int second_run_index) {
    RunAnalysis analysis;
    analysis.pooled = metrics_table(records, attrs, run_index);
    auto positional = positional_tables(records, attrs, run_index);
    analysis.gold_at_a = std::move(positional.first);
    analysis.gold_at_b = std::move(positional.second);

    const bool has_baseline =
        std::find(analysis.pooled.biases.begin(), analysis.pooled.biases.end(),
                  BiasKind::NoBias) != analysis.pooled.biases.end();
    if (has_baseline) {
        bias_delta(analysis.pooled);
        bias_delta(analysis.gold_at_a);
        bias_delta(analysis.gold_at_b);
    }

    analysis.answer_rates = answer_rate(records, attrs);

    std::vector<RunRecord> run1, run2;
    for (const RunRecord& record : records) {
        if (record.condition.run_index == run_index) run1.push_back(record);
        if (record.condition.run_index == second_run_index) run2.push_back(record);
    }
    if (!run2.empty() && run1.size() == run2.size()) {
        analysis.consistency = consistency_rate(run1, run2, attrs);
    }

    if (has_baseline && analysis.pooled.biases.size() > 1) {
        analysis.robustness = robustness_rate(records, attrs, run_index);

        bool any_confidence = false;
        std::map<BiasKind, std::vector<RunRecord>> by_bias;
        for (const RunRecord& record : run1) {
            if (record.decision_confidence) any_confidence = true;
            by_bias[record.condition.bias].push_back(record);
        }
        if (any_confidence) {
            const std::vector<RunRecord>& baseline = by_bias[BiasKind::NoBias];
            for (const auto& [bias, biased] : by_bias) {
                if (bias == BiasKind::NoBias) continue;
                analysis.confidence_shifts[bias] =
                    confidence_shift(biased, baseline, {}, attrs);
            }
        }
    }
    return analysis;
}

std::string render_analysis(const RunAnalysis& analysis, const RenderSpec& spec) {
    std::string out;
    out += "# micro-accuracy, both presentations pooled\n";
    out += render_table(analysis.pooled, spec);
    out += "\n# accuracy, gold candidate shown at A\n";
    out += render_table(analysis.gold_at_a, spec);
    out += "\n# accuracy, gold candidate shown at B\n";
    out += render_table(analysis.gold_at_b, spec);
    out += "\n";
    out += render_table(analysis.answer_rates, spec);
    if (analysis.consistency) {
        out += "\n";
        out += render_table(*analysis.consistency, spec);
    }
    if (analysis.robustness) {
        out += "\n";
        out += render_table(*analysis.robustness, spec);
    }
    if (!analysis.confidence_shifts.empty()) {
        Grid grid({"Bias", "n pairs", "mean delta", "min delta", "max delta"});
        for (const auto& [bias, shift] : analysis.confidence_shifts) {
            if (shift.pairs.empty()) continue;
            grid.add_row({std::string(to_label(bias)),
                          std::to_string(shift.pairs.size()),
                          signed_fixed(shift.mean_delta, 4),
                          signed_fixed(shift.min_delta, 4),
                          signed_fixed(shift.max_delta, 4)});
        }
        out += "\n# gold-side decision-confidence shift vs no-bias\n";
        out += grid.render(spec.format);
    }
    return out;
}

namespace {

json cell_json(const TableCell& cell) {
    json j;
    j["n_planned"] = cell.counts.n_planned;
    j["n_answered"] = cell.counts.n_answered;
    j["n_correct"] = cell.counts.n_correct;
    if (cell.counts.has_accuracy()) j["accuracy"] = cell.counts.accuracy();
    if (cell.delta_pp) j["delta_pp"] = *cell.delta_pp;
    if (cell.direction) {
        j["direction"] = *cell.direction == Direction::Up     ? "up"
                         : *cell.direction == Direction::Down ? "down"
                                                              : "flat";
    }
    return j;
}

json table_json(const MetricsTable& table) {
    json j;
    if (table.gold_filter) j["gold_position"] = to_label(*table.gold_filter);
    json cells = json::object();
    for (const auto& [key, cell] : table.cells) {
        const auto& [task, stratum, bias] = key;
        const std::string name = std::string(to_label(task)) + "/" +
                                 std::string(stratum_label(stratum)) + "/" +
                                 std::string(to_label(bias));
        cells[name] = cell_json(cell);
    }
    j["cells"] = std::move(cells);
    return j;
}

} // namespace

std::string metrics_json(const RunAnalysis& analysis) {
    json j;
    j["accuracy_definition"] =
        "correct / answered over the item x presentation grid; non-judgments are "
        "missing data, planned counts reported alongside";
    j["pooled"] = table_json(analysis.pooled);
    j["gold_at_a"] = table_json(analysis.gold_at_a);
    j["gold_at_b"] = table_json(analysis.gold_at_b);

    json rates = json::object();
    for (const auto& [key, cell] : analysis.answer_rates.cells) {
        const auto& [task, bias, backend] = key;
        const std::string name = std::string(to_label(task)) + "/" +
                                 std::string(to_label(bias)) + "/" + backend;
        json c;
        c["n_total"] = cell.n_total;
        c["n_errored"] = cell.n_errored;
        c["n_answered"] = cell.n_answered;
        c["n_no_marker"] = cell.n_no_marker;
        c["n_tie"] = cell.n_tie;
        c["n_truncated"] = cell.n_truncated;
        if (auto rate = cell.rate()) c["rate"] = *rate;
        rates[name] = std::move(c);
    }
    j["answer_rates"] = std::move(rates);
    if (auto rate = analysis.answer_rates.overall.rate()) {
        j["answer_rate_overall"] = *rate;
    }

    if (analysis.consistency) {
        json cr = json::object();
        for (const auto& [key, cell] : analysis.consistency->cells) {
            const auto& [task, stratum, bias] = key;
            const std::string name = std::string(to_label(task)) + "/" +
                                     std::string(stratum_label(stratum)) + "/" +
                                     std::string(to_label(bias));
            json c;
            c["n_pairs_total"] = cell.n_pairs_total;
            c["n_pairs_both_answered"] = cell.n_pairs_both_answered;
            c["n_agree"] = cell.n_agree;
            if (auto value = cell.cr()) c["cr"] = *value;
            c["n_items_total"] = cell.n_items_total;
            c["n_items_both_answered"] = cell.n_items_both_answered;
            c["n_items_agree"] = cell.n_items_agree;
            if (auto value = cell.cr_items()) c["cr_items"] = *value;
            cr[name] = std::move(c);
        }
        j["consistency"] = std::move(cr);
    }

    if (analysis.robustness) {
        json rr = json::object();
        rr["definition"] = kRobustnessDefinition;
        for (const auto& [key, cell] : analysis.robustness->cells) {
            const auto& [task, bias] = key;
            const std::string name =
                std::string(to_label(task)) + "/" + std::string(to_label(bias));
            json c;
            c["n_joint_answered"] = cell.n_joint_answered;
            c["n_agree"] = cell.n_agree;
            if (auto rate = cell.rate()) c["rate"] = *rate;
            rr[name] = std::move(c);
        }
        for (const auto& [bias, cell] : analysis.robustness->overall) {
            json c;
            c["n_joint_answered"] = cell.n_joint_answered;
            c["n_agree"] = cell.n_agree;
            if (auto rate = cell.rate()) c["rate"] = *rate;
            rr[std::string("Overall/") + std::string(to_label(bias))] = std::move(c);
        }
        j["robustness"] = std::move(rr);
    }

    if (!analysis.confidence_shifts.empty()) {
        json shifts = json::object();
        for (const auto& [bias, shift] : analysis.confidence_shifts) {
            if (shift.pairs.empty()) continue;
            json c;
            c["n_pairs"] = shift.pairs.size();
            c["mean_delta"] = shift.mean_delta;
            c["min_delta"] = shift.min_delta;
            c["max_delta"] = shift.max_delta;
            shifts[std::string(to_label(bias))] = std::move(c);
        }
        j["confidence_shift_vs_no_bias"] = std::move(shifts);
    }
    return j.dump(2);
}

std::string export_manifest(const RunPlan& plan, const RunSummary& summary) {
    json j = json::parse(plan_to_json(plan));
    j["manifest_version"] = 1;
    j["outcome"] = json{{"planned", summary.planned},
                        {"answered", summary.answered},
                        {"non_judgments", summary.non_judgments},
                        {"errors", summary.errors}};
    return j.dump(2);
}

} // namespace judgeaudit
