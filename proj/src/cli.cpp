#include "judgeaudit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "judgeaudit/bias.hpp"
#include "judgeaudit/remote_judge.hpp"
#include "judgeaudit/report.hpp"
#include "judgeaudit/sim_judge.hpp"

namespace judgeaudit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

SchemaConfig schema_from_flags(const std::vector<std::string>& mappings) {
    SchemaConfig schema;
    for (const std::string& mapping : mappings) {
        const size_t eq = mapping.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Usage,
                        "--schema expects canonical=external, got '" + mapping + "'");
        }
        const std::string canonical = mapping.substr(0, eq);
        const std::string external = mapping.substr(eq + 1);
        if (canonical == "id") schema.id = external;
        else if (canonical == "task") schema.task = external;
        else if (canonical == "difficulty") schema.difficulty = external;
        else if (canonical == "instruction") schema.instruction = external;
        else if (canonical == "good_response") schema.good_response = external;
        else if (canonical == "bad_response") schema.bad_response = external;
        else {
            throw Error(ErrorKind::Usage,
                        "--schema: unknown canonical field '" + canonical + "'");
        }
    }
    return schema;
}

std::vector<BiasKind> biases_from_flag(const std::string& text) {
    std::vector<BiasKind> biases;
    if (text == "all") {
        for (const BiasSpec& spec : bias_catalog()) {
            if (spec.kind == BiasKind::NoBias || spec.has_injectable_text()) {
                biases.push_back(spec.kind);
            }
        }
        return biases;
    }
    for (const std::string& label : split_csv(text)) {
        auto bias = parse_bias(label);
        if (!bias) throw Error(ErrorKind::Usage, "unknown bias '" + label + "'");
        biases.push_back(*bias);
    }
    return biases;
}

std::vector<Presentation> presentations_from_flag(const std::string& text,
                                                  const PresentationAlias& alias) {
    std::vector<Presentation> presentations;
    for (const std::string& label : split_csv(text)) {
        auto presentation = alias.resolve(label);
        if (!presentation) {
            throw Error(ErrorKind::Usage, "unknown presentation '" + label + "'");
        }
        presentations.push_back(*presentation);
    }
    return presentations;
}

std::string read_file(const std::string& path, ErrorKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(kind, "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Store, "cannot write " + path.string());
    out << content;
}

SimProfile profile_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::Config, "sim profile file is not a JSON object");
    }
    SimProfile profile;
    profile.name = j.value("name", std::string{"custom"});
    profile.skill = j.value("skill", 0.0);
    profile.base_pref_a = j.value("base_pref_a", 0.5);
    profile.nonanswer_rate = j.value("nonanswer_rate", 0.0);
    profile.emit_token_confidences = j.value("emit_token_confidences", true);
    if (j.contains("susceptibility")) {
        for (const auto& [label, value] : j.at("susceptibility").items()) {
            auto bias = parse_bias(label);
            if (!bias) {
                throw Error(ErrorKind::Config,
                            "sim profile: unknown bias '" + label + "' in susceptibility");
            }
            profile.susceptibility[*bias] = value.get<double>();
        }
    }
    profile.validate();
    return profile;
}

EndpointConfig endpoint_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::Config, "endpoint file is not a JSON object");
    }
    EndpointConfig config;
    config.base_url = j.value("base_url", std::string{});
    config.path = j.value("path", config.path);
    config.model_name = j.value("model_name", std::string{});
    config.auth_token_env_var = j.value("auth_token_env_var", config.auth_token_env_var);
    config.timeout_ms = j.value("timeout_ms", config.timeout_ms);
    config.max_retries = j.value("max_retries", config.max_retries);
    if (j.contains("backoff_ms")) {
        config.backoff_ms = j.at("backoff_ms").get<std::vector<int>>();
    }
    config.request_token_probabilities =
        j.value("request_token_probabilities", config.request_token_probabilities);
    config.max_parallel = j.value("max_parallel", config.max_parallel);
    const std::string placement = j.value("role_placement", std::string{"user"});
    if (placement == "user") {
        config.role_placement = RolePlacement::User;
    } else if (placement == "system") {
        config.role_placement = RolePlacement::System;
    } else {
        throw Error(ErrorKind::Config, "role_placement must be 'user' or 'system'");
    }
    config.validate();
    return config;
}

// Options shared by run and simulate, with flag > config file > default
// precedence. Config values apply only where the flag was not given.
struct RunOptions {
    std::string corpus_path;
    std::vector<std::string> schema_flags;
    std::string out_dir;
    std::string backend = "sim:oracle";
    std::string biases = "all";
    std::string presentations = "orig,swap";
    std::string alias_orig = "GoldAtA";
    int repeats = 1;
    bool consistency = false;
    std::string mode = "preamble";
    int parallelism = 1;
    uint64_t master_seed = 0;
    int64_t max_calls = 0;
    std::string run_id;
    std::string task;
    std::string difficulty;
    int64_t max_items = 0;
    std::string endpoint_file;
    std::string profile_file;
    std::string config_file;
    bool resume = false;
    double temperature = 0.6;
    double top_p = 0.95;
    int top_k = 20;
    int max_tokens = 1024;
};

void add_run_flags(CLI::App* cmd, RunOptions& options, bool corpus_required) {
    auto* corpus = cmd->add_option("--corpus", options.corpus_path,
                                   "corpus file (line-delimited records)");
    if (corpus_required) corpus->required();
    cmd->add_option("--schema", options.schema_flags,
                    "field mapping canonical=external (repeatable)");
    cmd->add_option("--out", options.out_dir, "run directory")->required();
    cmd->add_option("--backend", options.backend,
                    "sim:<profile>, sim-file:<path>, or remote");
    cmd->add_option("--biases", options.biases, "comma list of conditions, or 'all'");
    cmd->add_option("--presentations", options.presentations,
                    "comma list from orig,swap,GoldAtA,GoldAtB");
    cmd->add_option("--alias-orig", options.alias_orig,
                    "which gold placement 'orig' denotes (GoldAtA or GoldAtB)");
    cmd->add_option("--repeats", options.repeats, "independent run indices per condition");
    cmd->add_flag("--consistency", options.consistency,
                  "request test-retest analysis (needs repeats >= 2)");
    cmd->add_option("--mode", options.mode, "injection mode: preamble or inline");
    cmd->add_option("--parallelism", options.parallelism, "max in-flight judge calls");
    cmd->add_option("--master-seed", options.master_seed, "seed for simulated backends");
    cmd->add_option("--max-calls", options.max_calls,
                    "stop after this many new calls (resume later)");
    cmd->add_option("--run-id", options.run_id, "explicit run id");
    cmd->add_option("--task", options.task, "select one task");
    cmd->add_option("--difficulty", options.difficulty, "select one difficulty");
    cmd->add_option("--max-items", options.max_items, "prefix-truncate the selection");
    cmd->add_option("--endpoint", options.endpoint_file, "remote endpoint config JSON");
    cmd->add_option("--profile-file", options.profile_file, "sim profile JSON");
    cmd->add_option("--config", options.config_file, "config file (flags override it)");
    cmd->add_flag("--resume", options.resume, "continue an interrupted run directory");
    cmd->add_option("--temperature", options.temperature, "decoding temperature");
    cmd->add_option("--top-p", options.top_p, "decoding top_p");
    cmd->add_option("--top-k", options.top_k, "decoding top_k");
    cmd->add_option("--max-tokens", options.max_tokens, "decoding max_tokens");
}

void apply_config_file(CLI::App* cmd, RunOptions& options) {
    if (options.config_file.empty()) return;
    json j = json::parse(read_file(options.config_file, ErrorKind::Config), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::Config, "config file is not a JSON object");
    }
    if (j.value("config_version", 1) != 1) {
        throw Error(ErrorKind::Config, "unsupported config_version");
    }
    auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (j.contains("corpus") && unset("--corpus")) {
        options.corpus_path = j["corpus"].get<std::string>();
    }
    if (j.contains("backend") && unset("--backend")) {
        options.backend = j["backend"].get<std::string>();
    }
    if (j.contains("biases") && unset("--biases")) {
        options.biases = j["biases"].get<std::string>();
    }
    if (j.contains("presentations") && unset("--presentations")) {
        options.presentations = j["presentations"].get<std::string>();
    }
    if (j.contains("alias_orig") && unset("--alias-orig")) {
        options.alias_orig = j["alias_orig"].get<std::string>();
    }
    if (j.contains("repeats") && unset("--repeats")) {
        options.repeats = j["repeats"].get<int>();
    }
    if (j.contains("consistency") && unset("--consistency")) {
        options.consistency = j["consistency"].get<bool>();
    }
    if (j.contains("mode") && unset("--mode")) {
        options.mode = j["mode"].get<std::string>();
    }
    if (j.contains("parallelism") && unset("--parallelism")) {
        options.parallelism = j["parallelism"].get<int>();
    }
    if (j.contains("master_seed") && unset("--master-seed")) {
        options.master_seed = j["master_seed"].get<uint64_t>();
    }
    if (j.contains("endpoint") && unset("--endpoint")) {
        options.endpoint_file = j["endpoint"].get<std::string>();
    }
    if (j.contains("temperature") && unset("--temperature")) {
        options.temperature = j["temperature"].get<double>();
    }
    if (j.contains("top_p") && unset("--top-p")) {
        options.top_p = j["top_p"].get<double>();
    }
    if (j.contains("top_k") && unset("--top-k")) {
        options.top_k = j["top_k"].get<int>();
    }
    if (j.contains("max_tokens") && unset("--max-tokens")) {
        options.max_tokens = j["max_tokens"].get<int>();
    }
}

RunPlan plan_from_options(const RunOptions& options, const std::string& backend_id) {
    RunPlan plan;
    plan.run_id = options.run_id;
    plan.corpus_path = options.corpus_path;
    plan.schema = schema_from_flags(options.schema_flags);
    if (!options.task.empty()) {
        auto task = parse_task(options.task);
        if (!task) throw Error(ErrorKind::Usage, "unknown task '" + options.task + "'");
        plan.selector.task = task;
    }
    if (!options.difficulty.empty()) {
        auto difficulty = parse_difficulty(options.difficulty);
        if (!difficulty) {
            throw Error(ErrorKind::Usage, "unknown difficulty '" + options.difficulty + "'");
        }
        plan.selector.difficulty = difficulty;
    }
    if (options.max_items > 0) plan.selector.max_items = options.max_items;

    if (options.alias_orig == "GoldAtA") {
        plan.alias.orig = Presentation::GoldAtA;
    } else if (options.alias_orig == "GoldAtB") {
        plan.alias.orig = Presentation::GoldAtB;
    } else {
        throw Error(ErrorKind::Usage, "--alias-orig must be GoldAtA or GoldAtB");
    }

    plan.biases = biases_from_flag(options.biases);
    plan.presentations = presentations_from_flag(options.presentations, plan.alias);
    plan.repeats = options.repeats;
    plan.consistency = options.consistency;
    auto mode = parse_injection_mode(options.mode);
    if (!mode) throw Error(ErrorKind::Usage, "--mode must be preamble or inline");
    plan.injection_mode = *mode;
    plan.decoding.temperature = options.temperature;
    plan.decoding.top_p = options.top_p;
    plan.decoding.top_k = options.top_k;
    plan.decoding.max_tokens = options.max_tokens;
    plan.backend_descriptor = backend_id;
    plan.master_seed = options.master_seed;
    plan.parallelism = options.parallelism;
    return plan_run(std::move(plan));
}

std::unique_ptr<JudgeBackend> backend_from_options(const RunOptions& options) {
    // An explicit profile file wins over the (possibly defaulted) descriptor.
    if (!options.profile_file.empty()) {
        return make_sim_judge(
            profile_from_json_text(read_file(options.profile_file, ErrorKind::Config)),
            options.master_seed);
    }
    const std::string& descriptor = options.backend;
    if (descriptor.rfind("sim-file:", 0) == 0) {
        const std::string path = descriptor.substr(9);
        return make_sim_judge(profile_from_json_text(read_file(path, ErrorKind::Config)),
                              options.master_seed);
    }
    if (descriptor.rfind("sim:", 0) == 0) {
        return make_sim_judge(named_profile(descriptor.substr(4)), options.master_seed);
    }
    if (descriptor == "remote") {
        if (options.endpoint_file.empty()) {
            throw Error(ErrorKind::Usage, "--backend remote needs --endpoint <file>");
        }
        return make_remote_judge(
            endpoint_from_json_text(read_file(options.endpoint_file, ErrorKind::Config)));
    }
    throw Error(ErrorKind::Usage, "unknown backend '" + descriptor + "'");
}

// Rebuilds the backend a manifest describes. Named sim profiles reconstruct
// exactly from the descriptor plus the recorded master seed; anything else
// needs the endpoint or profile file passed again.
std::unique_ptr<JudgeBackend> backend_for_replay(const RunPlan& plan,
                                                 const RunOptions& options) {
    if (!options.profile_file.empty()) {
        return make_sim_judge(
            profile_from_json_text(read_file(options.profile_file, ErrorKind::Config)),
            plan.master_seed);
    }
    if (!options.endpoint_file.empty()) {
        return make_remote_judge(
            endpoint_from_json_text(read_file(options.endpoint_file, ErrorKind::Config)));
    }
    const std::string& descriptor = plan.backend_descriptor;
    if (descriptor.rfind("sim:", 0) == 0) {
        const size_t seed_sep = descriptor.find(':', 4);
        const std::string name = descriptor.substr(4, seed_sep == std::string::npos
                                                          ? std::string::npos
                                                          : seed_sep - 4);
        const auto names = named_profile_names();
        if (std::find(names.begin(), names.end(), name) != names.end()) {
            return make_sim_judge(named_profile(name), plan.master_seed);
        }
    }
    throw Error(ErrorKind::Config,
                "cannot rebuild backend '" + descriptor +
                    "' from the manifest alone; pass --endpoint or --profile-file");
}

struct LoadedRun {
    RunPlan plan;
    Corpus corpus;
    std::vector<RunRecord> records;
    AttrMap attrs;
};

LoadedRun load_run(const std::string& run_dir, const std::string& corpus_override,
                   const std::vector<std::string>& schema_flags) {
    LoadedRun loaded;
    loaded.plan = plan_from_json(RunStore::read_metadata(run_dir));
    if (!corpus_override.empty()) {
        loaded.corpus = load_corpus(corpus_override, schema_from_flags(schema_flags));
    } else {
        loaded.corpus = corpus_for_plan(loaded.plan);
    }
    loaded.records = RunStore::read_records(run_dir);
    loaded.attrs = attrs_of(loaded.corpus);
    return loaded;
}

RunSummary run_to_store(const RunPlan& plan, const Corpus& corpus, JudgeBackend& backend,
                        const std::string& out_dir, bool resume,
                        const ExecuteOptions& exec_options, std::ostream& err) {
    const fs::path records_path = fs::path(out_dir) / kRecordsFileName;
    if (!resume && fs::exists(records_path) && fs::file_size(records_path) > 0) {
        throw Error(ErrorKind::Store,
                    "run directory already holds records; pass --resume to continue it");
    }
    RunStore store(out_dir, plan_to_json(plan));
    const RunSummary summary = execute(plan, corpus, backend, store, exec_options);
    write_file(fs::path(out_dir) / "manifest.json", export_manifest(plan, summary));
    err << "run " << plan.run_id << ": planned " << summary.planned << ", executed "
        << summary.executed << " (skipped " << summary.skipped_resume << "), answered "
        << summary.answered << ", non-judgments " << summary.non_judgments << ", errors "
        << summary.errors << "\n";
    return summary;
}

RenderSpec spec_from_flags(const std::string& format, int decimals, bool counts) {
    RenderSpec spec;
    auto parsed = parse_render_format(format);
    if (!parsed) {
        throw Error(ErrorKind::Usage, "unknown format '" + format + "'");
    }
    spec.format = *parsed;
    spec.decimals = decimals;
    spec.include_counts = counts;
    return spec;
}

void write_report_files(const fs::path& run_dir, const RunAnalysis& analysis) {
    RenderSpec markdown;
    markdown.format = RenderFormat::Markdown;
    RenderSpec csv;
    csv.format = RenderFormat::CommaSeparated;
    write_file(run_dir / "report.md", render_analysis(analysis, markdown));
    write_file(run_dir / "report.csv", render_analysis(analysis, csv));
    write_file(run_dir / "metrics.json", metrics_json(analysis));
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"judgeaudit: bias and consistency audit harness for pairwise "
                 "LLM code judges"};
    app.require_subcommand(1);

    int exit_code = 0;

    // validate
    std::string v_corpus;
    std::vector<std::string> v_schema;
    auto* validate = app.add_subcommand("validate", "load a corpus and print its stats");
    validate->add_option("--corpus", v_corpus, "corpus file")->required();
    validate->add_option("--schema", v_schema, "field mapping canonical=external");
    validate->callback([&] {
        const Corpus corpus = load_corpus(v_corpus, schema_from_flags(v_schema));
        RenderSpec spec;
        out << "items: " << corpus.items.size() << "\n";
        out << render_stats(corpus_stats(corpus), spec);
    });

    // show-bias
    std::string b_bias;
    auto* show_bias = app.add_subcommand("show-bias", "print bias texts for inspection");
    show_bias->add_option("--bias", b_bias, "one condition (default: all)");
    show_bias->callback([&] {
        auto print = [&](const BiasSpec& spec) {
            out << "== " << to_label(spec.kind) << "\n";
            if (spec.realized_by_presentation) {
                out << "(realized via presentation axis; no injectable text)\n";
                return;
            }
            out << "preamble: " << spec.notes.preamble << "\n";
            out << "note_a:   " << spec.notes.note_a << "\n";
            out << "note_b:   " << spec.notes.note_b << "\n";
        };
        if (b_bias.empty()) {
            for (const BiasSpec& spec : bias_catalog()) print(spec);
        } else {
            auto kind = parse_bias(b_bias);
            if (!kind) throw Error(ErrorKind::Usage, "unknown bias '" + b_bias + "'");
            print(bias_spec(*kind));
        }
    });

    // show-prompt
    std::string p_corpus, p_item, p_bias = "no-bias", p_presentation = "orig",
                p_mode = "preamble", p_alias = "GoldAtA";
    std::vector<std::string> p_schema;
    auto* show_prompt =
        app.add_subcommand("show-prompt", "print one fully assembled judge prompt");
    show_prompt->add_option("--corpus", p_corpus, "corpus file")->required();
    show_prompt->add_option("--item", p_item, "item id")->required();
    show_prompt->add_option("--bias", p_bias, "condition");
    show_prompt->add_option("--presentation", p_presentation, "orig|swap|GoldAtA|GoldAtB");
    show_prompt->add_option("--mode", p_mode, "preamble or inline");
    show_prompt->add_option("--alias-orig", p_alias, "gold placement 'orig' denotes");
    show_prompt->add_option("--schema", p_schema, "field mapping canonical=external");
    show_prompt->callback([&] {
        const Corpus corpus = load_corpus(p_corpus, schema_from_flags(p_schema));
        const EvalItem* found = nullptr;
        for (const EvalItem& item : corpus.items) {
            if (item.id == p_item) {
                found = &item;
                break;
            }
        }
        if (found == nullptr) {
            throw Error(ErrorKind::Corpus, "item '" + p_item + "' not in corpus");
        }
        PresentationAlias alias;
        alias.orig = p_alias == "GoldAtB" ? Presentation::GoldAtB : Presentation::GoldAtA;
        auto presentation = alias.resolve(p_presentation);
        if (!presentation) {
            throw Error(ErrorKind::Usage, "unknown presentation '" + p_presentation + "'");
        }
        auto kind = parse_bias(p_bias);
        if (!kind) throw Error(ErrorKind::Usage, "unknown bias '" + p_bias + "'");
        auto mode = parse_injection_mode(p_mode);
        if (!mode) throw Error(ErrorKind::Usage, "--mode must be preamble or inline");
        const PresentedPair pair = present(*found, *presentation);
        const JudgePrompt prompt =
            build_prompt(pair, found->instruction, bias_spec(*kind), *mode);
        out << prompt.body;
        err << "digest: " << prompt.content_digest << "\n";
    });

    // run
    RunOptions r;
    std::string r_manifest;
    auto* run = app.add_subcommand("run", "execute a judging grid into a run directory");
    add_run_flags(run, r, /*corpus_required=*/false);
    run->add_option("--manifest", r_manifest, "re-execute the plan a manifest records");
    run->callback([&] {
        apply_config_file(run, r);
        ExecuteOptions exec_options;
        exec_options.max_calls = r.max_calls;
        if (!r_manifest.empty()) {
            const RunPlan plan =
                plan_from_json(read_file(r_manifest, ErrorKind::Config));
            const Corpus corpus = corpus_for_plan(plan);
            auto backend = backend_for_replay(plan, r);
            run_to_store(plan, corpus, *backend, r.out_dir, r.resume, exec_options, err);
            return;
        }
        if (r.corpus_path.empty()) {
            throw Error(ErrorKind::Usage, "run needs --corpus (or --manifest)");
        }
        const Corpus corpus = load_corpus(r.corpus_path, schema_from_flags(r.schema_flags));
        auto backend = backend_from_options(r);
        RunPlan plan = plan_from_options(r, backend->id());
        run_to_store(plan, corpus, *backend, r.out_dir, r.resume, exec_options, err);
    });

    // simulate
    RunOptions s;
    s.repeats = 2;
    s.consistency = true;
    int64_t s_items = 200;
    auto* simulate = app.add_subcommand(
        "simulate", "run a seeded sim profile end-to-end (run + metrics + report)");
    add_run_flags(simulate, s, /*corpus_required=*/false);
    simulate->add_option("--items", s_items, "synthetic corpus size when no --corpus");
    simulate->add_option("--profile", s.backend,
                         "named sim profile (oracle|positional|coin|cue|mute)")
        ->transform([](std::string value) { return "sim:" + value; });
    simulate->callback([&] {
        apply_config_file(simulate, s);
        if (s.repeats < 2 && simulate->count("--consistency") == 0) {
            s.consistency = false;
        }
        Corpus corpus;
        if (!s.corpus_path.empty()) {
            corpus = load_corpus(s.corpus_path, schema_from_flags(s.schema_flags));
        } else {
            corpus = make_synthetic_corpus(s_items, s.master_seed);
            s.corpus_path = "synthetic:" + std::to_string(s_items) + ":" +
                            std::to_string(s.master_seed);
        }
        if (s.backend.rfind("sim", 0) != 0 && s.profile_file.empty()) {
            throw Error(ErrorKind::Usage, "simulate only drives simulated backends");
        }
        auto backend = backend_from_options(s);
        RunPlan plan = plan_from_options(s, backend->id());
        ExecuteOptions exec_options;
        exec_options.max_calls = s.max_calls;
        run_to_store(plan, corpus, *backend, s.out_dir, s.resume, exec_options, err);

        const std::vector<RunRecord> records = RunStore::read_records(s.out_dir);
        const AttrMap attrs = attrs_of(corpus);
        const RunAnalysis analysis = analyze_run(records, attrs);
        write_report_files(s.out_dir, analysis);
        RenderSpec spec;
        out << render_analysis(analysis, spec);
    });

    // consistency
    std::string c_run, c_corpus, c_format = "plain";
    std::vector<std::string> c_schema;
    int c_decimals = 2;
    bool c_counts = false;
    std::vector<int> c_runs = {1, 2};
    auto* consistency =
        app.add_subcommand("consistency", "test-retest report from two run indices");
    consistency->add_option("--run", c_run, "run directory")->required();
    consistency->add_option("--corpus", c_corpus, "corpus override");
    consistency->add_option("--schema", c_schema, "field mapping for --corpus");
    consistency->add_option("--runs", c_runs, "two run indices")->expected(2);
    consistency->add_option("--format", c_format, "plain|csv|markdown");
    consistency->add_option("--decimals", c_decimals, "rendered decimal places");
    consistency->add_flag("--counts", c_counts, "print joint-answer counts");
    consistency->callback([&] {
        const LoadedRun loaded = load_run(c_run, c_corpus, c_schema);
        std::vector<RunRecord> run1, run2;
        for (const RunRecord& record : loaded.records) {
            if (record.condition.run_index == c_runs[0]) run1.push_back(record);
            if (record.condition.run_index == c_runs[1]) run2.push_back(record);
        }
        if (run1.empty() || run2.empty()) {
            throw Error(ErrorKind::Metrics,
                        "consistency needs records for both requested run indices");
        }
        const ConsistencyReport report = consistency_rate(run1, run2, loaded.attrs);
        out << render_table(report, spec_from_flags(c_format, c_decimals, c_counts));
    });

    // metrics
    std::string m_run, m_corpus, m_out;
    std::vector<std::string> m_schema;
    auto* metrics =
        app.add_subcommand("metrics", "machine-readable metrics from a run directory");
    metrics->add_option("--run", m_run, "run directory")->required();
    metrics->add_option("--corpus", m_corpus, "corpus override");
    metrics->add_option("--schema", m_schema, "field mapping for --corpus");
    metrics->add_option("--out", m_out, "also write the document to this file");
    metrics->callback([&] {
        const LoadedRun loaded = load_run(m_run, m_corpus, m_schema);
        const RunAnalysis analysis = analyze_run(loaded.records, loaded.attrs);
        const std::string document = metrics_json(analysis);
        if (!m_out.empty()) write_file(m_out, document);
        out << document << "\n";
    });

    // report
    std::string t_run, t_corpus, t_format = "plain";
    std::vector<std::string> t_schema;
    int t_decimals = 2;
    bool t_counts = false;
    auto* report =
        app.add_subcommand("report", "render result tables from a run directory");
    report->add_option("--run", t_run, "run directory")->required();
    report->add_option("--corpus", t_corpus, "corpus override");
    report->add_option("--schema", t_schema, "field mapping for --corpus");
    report->add_option("--format", t_format, "plain|csv|markdown");
    report->add_option("--decimals", t_decimals, "rendered decimal places");
    report->add_flag("--counts", t_counts, "print n_answered beside accuracy");
    report->callback([&] {
        const LoadedRun loaded = load_run(t_run, t_corpus, t_schema);
        const RunAnalysis analysis = analyze_run(loaded.records, loaded.attrs);
        write_report_files(t_run, analysis);
        out << render_analysis(analysis, spec_from_flags(t_format, t_decimals, t_counts));
    });

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("judgeaudit");
        for (const std::string& arg : args) argv.push_back(arg.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& help) {
        // Print the help of the subcommand being parsed, if any.
        const CLI::App* deepest = &app;
        for (const CLI::App* sub : app.get_subcommands({})) {
            if (sub->parsed()) deepest = sub;
        }
        out << deepest->help() << "\n";
        return 0;
    } catch (const CLI::ParseError& parse_error) {
        err << "usage error: " << parse_error.what() << "\n";
        err << app.help() << "\n";
        return 2;
    } catch (const Error& error) {
        err << "error: " << error.what() << "\n";
        return error.exit_code();
    } catch (const std::exception& exception) {
        err << "error: " << exception.what() << "\n";
        return 1;
    }
    return exit_code;
}

} // namespace judgeaudit
