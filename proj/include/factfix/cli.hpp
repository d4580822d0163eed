// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"

#include "factfix/baseline_corrector.hpp"
#include "factfix/config.hpp"
#include "factfix/corpus_json.hpp"
#include "factfix/corruptor.hpp"
#include "factfix/error.hpp"
#include "factfix/evaluator.hpp"
#include "factfix/external.hpp"
#include "factfix/jsonl.hpp"

// `factfix` command line: validate, corrupt, correct, evaluate, run-external.
// Exit codes: 0 success, 1 data error, 2 usage error.
namespace factfix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::size_t kBatchSize = 4096;

/// Thrown for problems with flags or their combination.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Fully resolved settings for one invocation.
struct RunConfig {
    std::string subcommand;
    CorruptorConfig corruptor;
    bool ignore_case = false;
    unsigned threads = 1;
    std::string in;
    std::string out;
    std::string stats;
    std::string triplets;
    std::string verdicts;
    std::string report;
    std::string corrupted_corpus;
    std::string external_cmd;
};

/// defaults < FACTFIX_SEED < config file < flags
inline RunConfig resolve(const std::string& subcommand, const ConfigOverlay& file, const ConfigOverlay& flags) {
    ConfigOverlay merged;
    if (const char* env = std::getenv("FACTFIX_SEED"); env && *env) {
        try {
            merged.seed = parse_seed(env);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("FACTFIX_SEED: ") + e.what());
        }
    }
    merged.overlay(file);
    merged.overlay(flags);

    RunConfig rc;
    rc.subcommand = subcommand;
    if (merged.alpha) rc.corruptor.alpha = *merged.alpha;
    if (merged.seed) rc.corruptor.master_seed = *merged.seed;
    if (merged.rule_weights) rc.corruptor.rule_weights = *merged.rule_weights;
    if (merged.on_inapplicable) rc.corruptor.on_inapplicable = *merged.on_inapplicable;
    rc.ignore_case = merged.ignore_case.value_or(false);
    rc.threads = merged.threads.value_or(1);
    rc.in = merged.in.value_or("");
    rc.out = merged.out.value_or("");
    rc.stats = merged.stats.value_or("");
    rc.triplets = merged.triplets.value_or("");
    rc.verdicts = merged.verdicts.value_or("");
    rc.report = merged.report.value_or("");
    rc.corrupted_corpus = merged.corrupted_corpus.value_or("");
    rc.external_cmd = merged.external_cmd.value_or("");
    rc.corruptor.validate();
    return rc;
}

namespace detail {

inline void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

inline void require_distinct(std::initializer_list<std::pair<const char*, const std::string*>> paths) {
    std::map<std::filesystem::path, const char*> seen;
    for (const auto& [flag, path] : paths) {
        if (path->empty()) continue;
        const std::filesystem::path norm = std::filesystem::absolute(*path).lexically_normal();
        auto [it, inserted] = seen.emplace(norm, flag);
        if (!inserted) throw UsageError(std::string(flag) + " and " + it->second + " name the same file " + *path);
    }
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw Error("failed writing " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int run_validate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    detail::require(rc.in, "--in");
    std::ifstream in = detail::open_in(rc.in);
    LineReader reader(in);
    std::unordered_set<std::string> ids;
    std::size_t total = 0;
    std::size_t invalid = 0;
    while (auto line = reader.next()) {
        ++total;
        const std::string where = "line " + std::to_string(reader.line_no()) + ": ";
        try {
            const CorpusRecord record = parse_record_unvalidated(*line, reader.line_no());
            const ValidationReport report = validate_record(record);
            bool bad = !report.ok();
            for (const Violation& v : report.violations) err << where << v.message << "\n";
            if (!ids.insert(record.id()).second) {
                err << where << "duplicate id \"" << record.id() << "\"\n";
                bad = true;
            }
            invalid += bad ? 1 : 0;
        } catch (const Error& e) {
            err << e.what() << "\n";
            ++invalid;
        }
    }
    out << "validated " << total << " records: " << (total - invalid) << " valid, " << invalid << " invalid\n";
    return invalid == 0 ? kExitOk : kExitData;
}

inline int run_corrupt(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    detail::require(rc.in, "--in");
    detail::require(rc.out, "--out");
    const std::string stats_path = rc.stats.empty() ? rc.out + ".stats.json" : rc.stats;
    detail::require_distinct({{"--in", &rc.in}, {"--out", &rc.out}, {"--stats", &stats_path},
                              {"--corrupted-corpus", &rc.corrupted_corpus}});

    std::ifstream in = detail::open_in(rc.in);
    std::ofstream triplets = detail::open_out(rc.out);
    std::optional<std::ofstream> corpus_out;
    if (!rc.corrupted_corpus.empty()) corpus_out = detail::open_out(rc.corrupted_corpus);

    LineReader reader(in);
    std::unordered_set<std::string> ids;
    std::vector<CorpusRecord> batch;
    DatasetStats stats;
    std::size_t rejected = 0;

    const auto flush = [&] {
        Dataset ds = build_dataset(batch, rc.corruptor, rc.threads);
        for (const CorruptedRecord& r : ds.records) {
            triplets << serialize_triplet(r.triplet) << '\n';
            if (!r.triplet.record.diagnostic.empty()) {
                err << "record " << r.triplet.id << ": " << r.triplet.record.diagnostic << "\n";
            }
        }
        if (corpus_out) {
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const CorpusRecord corrupted{batch[i].document, ds.records[i].corrupted_summary};
                *corpus_out << serialize_record(corrupted) << '\n';
            }
        }
        stats.merge(ds.stats);
        batch.clear();
    };

    while (auto line = reader.next()) {
        try {
            CorpusRecord record = parse_record(*line, reader.line_no());
            if (!ids.insert(record.id()).second) {
                throw SchemaError("line " + std::to_string(reader.line_no()) + ": duplicate id \"" + record.id() + "\"");
            }
            batch.push_back(std::move(record));
        } catch (const Error& e) {
            err << e.what() << "\n";
            ++rejected;
        }
        if (batch.size() == kBatchSize) flush();
    }
    if (!batch.empty()) flush();
    detail::finish(triplets, rc.out);
    if (corpus_out) detail::finish(*corpus_out, rc.corrupted_corpus);

    stats.errors += rejected;
    std::ofstream stats_out = detail::open_out(stats_path);
    stats_out << stats_to_json(stats).dump(2) << '\n';
    detail::finish(stats_out, stats_path);

    out << "corrupted " << stats.corrupted << " of " << stats.total << " records";
    for (CorruptionClass c : kAllClasses) out << ", " << to_string(c) << "=" << stats.count(c);
    out << ", inapplicable=" << stats.inapplicable << "\n";
    return rejected == 0 ? kExitOk : kExitData;
}

inline int run_correct(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    detail::require(rc.in, "--in");
    detail::require(rc.out, "--out");
    detail::require_distinct({{"--in", &rc.in}, {"--out", &rc.out}});
    std::ifstream in = detail::open_in(rc.in);
    std::ofstream verdicts = detail::open_out(rc.out);
    LineReader reader(in);
    std::size_t total = 0;
    std::size_t changed = 0;
    std::size_t rejected = 0;
    while (auto line = reader.next()) {
        try {
            const CorpusRecord record = parse_record(*line, reader.line_no());
            const CorrectorVerdict v = correct(record.summary, record.document);
            verdicts << verdict_to_json(record.id(), v).dump() << '\n';
            ++total;
            changed += v.changed ? 1 : 0;
        } catch (const Error& e) {
            err << e.what() << "\n";
            ++rejected;
        }
    }
    detail::finish(verdicts, rc.out);
    out << "corrected " << total << " summaries, " << changed << " changed\n";
    return rejected == 0 ? kExitOk : kExitData;
}

namespace detail {

inline std::unordered_map<std::string, std::string> load_verdicts(const std::string& path) {
    std::ifstream in = open_in(path);
    LineReader reader(in);
    std::unordered_map<std::string, std::string> out;
    while (auto line = reader.next()) {
        const std::string where = path + " line " + std::to_string(reader.line_no());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(*line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(where + ": malformed JSON: " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("corrected") ||
            !j["corrected"].is_string()) {
            throw SchemaError(where + ": verdict needs string \"id\" and \"corrected\"");
        }
        std::string id = j["id"].get<std::string>();
        if (!out.emplace(id, j["corrected"].get<std::string>()).second) {
            throw InputError(where + ": duplicate verdict id \"" + id + "\"");
        }
    }
    return out;
}

inline void finish_report(const Evaluation& eval, const std::string& report_path, std::ostream& out) {
    if (eval.counts().total() == 0) throw InputError("no triplets to evaluate");
    const EvalReport report = make_report(eval);
    if (!report_path.empty()) emit_report(report, report_path);
    out << render_table(report);
}

}  // namespace detail

inline int run_evaluate(const RunConfig& rc, std::ostream& out, std::ostream& /*err*/) {
    detail::require(rc.triplets, "--triplets");
    detail::require(rc.verdicts, "--verdicts");
    detail::require_distinct({{"--triplets", &rc.triplets}, {"--verdicts", &rc.verdicts}, {"--out", &rc.out}});

    std::unordered_map<std::string, std::string> verdicts = detail::load_verdicts(rc.verdicts);
    std::ifstream in = detail::open_in(rc.triplets);
    LineReader reader(in);
    Evaluation eval(rc.ignore_case);
    std::unordered_set<std::string> seen;
    while (auto line = reader.next()) {
        const Triplet t = parse_triplet(*line, reader.line_no());
        if (!seen.insert(t.id).second) throw InputError("duplicate triplet id \"" + t.id + "\"");
        auto it = verdicts.find(t.id);
        if (it == verdicts.end()) throw InputError("no verdict for id \"" + t.id + "\"");
        eval.add(t, it->second);
    }
    if (seen.size() != verdicts.size()) {
        std::set<std::string> extra;
        for (const auto& [id, text] : verdicts) {
            if (!seen.count(id)) extra.insert(id);
        }
        throw InputError("verdict id \"" + *extra.begin() + "\" has no triplet");
    }
    detail::finish_report(eval, rc.out, out);
    return kExitOk;
}

inline int run_external(const RunConfig& rc, std::ostream& out, std::ostream& /*err*/) {
    detail::require(rc.triplets, "--triplets");
    detail::require(rc.in, "--in");
    detail::require(rc.external_cmd, "--external-cmd");
    detail::require(rc.out, "--out");
    detail::require_distinct(
        {{"--triplets", &rc.triplets}, {"--in", &rc.in}, {"--out", &rc.out}, {"--report", &rc.report}});

    std::ifstream triplet_in = detail::open_in(rc.triplets);
    std::ifstream corpus_in = detail::open_in(rc.in);
    LineReader reader(triplet_in);
    DocumentLookup documents(corpus_in);
    std::vector<Triplet> sent;

    const std::vector<external::ExternalVerdict> returned =
        external::run_process(rc.external_cmd, [&]() -> std::optional<external::ExternalBatchItem> {
            auto line = reader.next();
            if (!line) return std::nullopt;
            Triplet t = parse_triplet(*line, reader.line_no());
            auto item = external::ExternalBatchItem::make(t.id, t.corrupted, documents.get(t.document_id));
            sent.push_back(std::move(t));
            return item;
        });

    std::unordered_map<std::string, const std::string*> by_id;
    for (const external::ExternalVerdict& v : returned) by_id.emplace(v.id, &v.corrected);

    std::ofstream verdicts = detail::open_out(rc.out);
    Evaluation eval(rc.ignore_case);
    for (const Triplet& t : sent) {
        const std::string& corrected = *by_id.at(t.id);
        const bool changed = classify_from_edit(t.corrupted, corrected, rc.ignore_case) == ConsistencyLabel::Inconsistent;
        verdicts << nlohmann::json{{"id", t.id}, {"corrected", corrected}, {"changed", changed},
                                   {"edits", nlohmann::json::array()}}
                        .dump()
                 << '\n';
        eval.add(t, corrected);
    }
    detail::finish(verdicts, rc.out);
    detail::finish_report(eval, rc.report, out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Dispatch

/// Runs one invocation. `args[0]` is the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Factual-error corruption, correction and evaluation toolkit", "factfix"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    struct Flags {
        std::map<std::string, std::string> values;
        bool ignore_case = false;
        std::string config;
    };
    std::map<std::string, Flags> flags;

    const auto add_path = [&](CLI::App* sub, const std::string& key, const std::string& help) {
        sub->add_option("--" + key, flags[sub->get_name()].values[key], help);
    };

    CLI::App* validate = app.add_subcommand("validate", "Check a corpus JSONL file against the schema");
    add_path(validate, "in", "Corpus JSONL");

    CLI::App* corrupt = app.add_subcommand("corrupt", "Build corrupted triplets from a corpus");
    add_path(corrupt, "in", "Corpus JSONL");
    add_path(corrupt, "out", "Triplet JSONL output");
    add_path(corrupt, "stats", "Dataset statistics JSON (default: <out>.stats.json)");
    add_path(corrupt, "corrupted-corpus", "Also write the corrupted summaries as corpus JSONL");
    add_path(corrupt, "alpha", "Corruption probability in [0,1] (default 0.3)");
    add_path(corrupt, "seed", "Master seed (default: FACTFIX_SEED or 0)");
    add_path(corrupt, "rule-weights", "Rule weights, e.g. e=1,n=1,d=1,p=1");
    add_path(corrupt, "on-inapplicable", "resample_other_rules or emit_clean");
    add_path(corrupt, "threads", "Worker threads (default 1)");

    CLI::App* correct_cmd = app.add_subcommand("correct", "Run the rule-based corrector over a corpus");
    add_path(correct_cmd, "in", "Corpus JSONL (summaries to correct)");
    add_path(correct_cmd, "out", "Verdict JSONL output");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score verdicts against triplets");
    add_path(evaluate, "triplets", "Triplet JSONL");
    add_path(evaluate, "verdicts", "Verdict JSONL");
    add_path(evaluate, "out", "Report JSON output (optional)");
    evaluate->add_flag("--ignore-case", flags["evaluate"].ignore_case, "Compare summaries case-insensitively");

    CLI::App* external_cmd = app.add_subcommand("run-external", "Score an external corrector over the batch protocol");
    add_path(external_cmd, "triplets", "Triplet JSONL");
    add_path(external_cmd, "in", "Corpus JSONL holding the source documents");
    add_path(external_cmd, "external-cmd", "Shell command of the corrector");
    add_path(external_cmd, "out", "Verdict JSONL output");
    add_path(external_cmd, "report", "Report JSON output (optional)");
    external_cmd->add_flag("--ignore-case", flags["run-external"].ignore_case, "Compare summaries case-insensitively");

    for (CLI::App* sub : {validate, corrupt, correct_cmd, evaluate, external_cmd}) {
        sub->add_option("--config", flags[sub->get_name()].config, "key = value configuration file");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    RunConfig rc;
    try {
        Flags& f = flags[name];
        ConfigOverlay file;
        if (!f.config.empty()) file = load_config_file(f.config);
        ConfigOverlay cli;
        for (const auto& [key, value] : f.values) {
            if (chosen->get_option("--" + key)->count() > 0) set_config_key(cli, key, value);
        }
        if (f.ignore_case) cli.ignore_case = true;
        rc = resolve(name, file, cli);
    } catch (const Error& e) {
        err << "factfix " << name << ": " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (name == "validate") return run_validate(rc, out, err);
        if (name == "corrupt") return run_corrupt(rc, out, err);
        if (name == "correct") return run_correct(rc, out, err);
        if (name == "evaluate") return run_evaluate(rc, out, err);
        return run_external(rc, out, err);
    } catch (const UsageError& e) {
        err << "factfix " << name << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "factfix " << name << ": " << e.what() << "\n";
        return kExitData;
    }
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return dispatch(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace factfix::cli
