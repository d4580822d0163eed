// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "factfix/corpus.hpp"
#include "factfix/corruptor.hpp"
#include "factfix/error.hpp"
#include "factfix/utf8.hpp"

// Two protocols: a corrector's edit decision read as a consistency label
// (any change means "inconsistent"), and exact-match correction accuracy on
// corrupted and clean items.
namespace factfix {

/// Trims and collapses whitespace runs to one space. Case and punctuation are kept.
inline std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (utf8::is_space(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

inline bool same_text(std::string_view a, std::string_view b, bool ignore_case = false) {
    if (ignore_case) return utf8::ascii_lower(normalize(a)) == utf8::ascii_lower(normalize(b));
    return normalize(a) == normalize(b);
}

enum class ConsistencyLabel { Consistent, Inconsistent };

inline std::string_view to_string(ConsistencyLabel l) {
    return l == ConsistencyLabel::Consistent ? "consistent" : "inconsistent";
}

/// Any edit means the corrector judged the input inconsistent.
inline ConsistencyLabel classify_from_edit(std::string_view original, std::string_view output,
                                           bool ignore_case = false) {
    return same_text(original, output, ignore_case) ? ConsistencyLabel::Consistent : ConsistencyLabel::Inconsistent;
}

/// Positive class is Inconsistent.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }

    void add(ConsistencyLabel predicted, ConsistencyLabel gold) {
        const bool p = predicted == ConsistencyLabel::Inconsistent;
        const bool g = gold == ConsistencyLabel::Inconsistent;
        (p ? (g ? tp : fp) : (g ? fn : tn)) += 1;
    }

    /// The same counts with Consistent as the positive class.
    ConfusionCounts flipped() const { return {tn, fp, fn, tp}; }

    bool operator==(const ConfusionCounts&) const = default;
};

/// Zero denominators give 0 and set the matching flag.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;

    bool operator==(const ClassMetrics&) const = default;
};

inline ClassMetrics metrics_for_positive(const ConfusionCounts& c) {
    ClassMetrics m;
    const std::uint64_t predicted = c.tp + c.fp;
    const std::uint64_t actual = c.tp + c.fn;
    m.precision_undefined = predicted == 0;
    m.recall_undefined = actual == 0;
    m.precision = predicted == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(predicted);
    m.recall = actual == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(actual);
    const std::uint64_t f1_den = 2 * c.tp + c.fp + c.fn;
    m.f1 = f1_den == 0 ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(f1_den);
    return m;
}

struct ClassificationScores {
    ConfusionCounts counts;
    ClassMetrics inconsistent;
    ClassMetrics consistent;
    double accuracy = 0.0;
    double micro_f1 = 0.0;

    bool operator==(const ClassificationScores&) const = default;
};

inline ClassificationScores scores_from_counts(const ConfusionCounts& c) {
    if (c.total() == 0) throw InputError("no predictions to score");
    ClassificationScores s;
    s.counts = c;
    s.inconsistent = metrics_for_positive(c);
    s.consistent = metrics_for_positive(c.flipped());
    s.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    // Micro-averaging pools both classes: pooled TP = tp + tn, pooled FP =
    // pooled FN = fp + fn, so F1 = 2(tp+tn) / (2(tp+tn) + 2(fp+fn)).
    const std::uint64_t pooled_tp = c.tp + c.tn;
    const std::uint64_t pooled_err = c.fp + c.fn;
    s.micro_f1 = static_cast<double>(2 * pooled_tp) / static_cast<double>(2 * pooled_tp + 2 * pooled_err);
    return s;
}

inline ClassificationScores score_classification(std::span<const ConsistencyLabel> predictions,
                                                 std::span<const ConsistencyLabel> gold) {
    if (predictions.size() != gold.size()) {
        throw InputError("predictions (" + std::to_string(predictions.size()) + ") and gold (" +
                         std::to_string(gold.size()) + ") differ in length");
    }
    if (predictions.empty()) throw InputError("no predictions to score");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) c.add(predictions[i], gold[i]);
    return scores_from_counts(c);
}

struct Rate {
    std::uint64_t hits = 0;
    std::uint64_t total = 0;

    double value() const { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }
    bool operator==(const Rate&) const = default;
};

struct CorrectionScores {
    Rate corrupted;  // restored to the reference
    Rate clean;      // left unchanged
    std::array<Rate, 4> per_class{};

    bool operator==(const CorrectionScores&) const = default;
};

inline ConsistencyLabel gold_label(const Triplet& t) {
    return t.record.is_noop() ? ConsistencyLabel::Consistent : ConsistencyLabel::Inconsistent;
}

/// Streaming accumulator behind both protocols.
class Evaluation {
public:
    explicit Evaluation(bool ignore_case = false) : ignore_case_(ignore_case) {}

    void add(const Triplet& t, std::string_view output) {
        const ConsistencyLabel gold = gold_label(t);
        counts_.add(classify_from_edit(t.corrupted, output, ignore_case_), gold);
        if (t.record.is_noop()) {
            correction_.clean.total += 1;
            if (same_text(output, t.corrupted, ignore_case_)) correction_.clean.hits += 1;
        } else {
            const bool restored = same_text(output, t.reference, ignore_case_);
            Rate& cls = correction_.per_class[static_cast<std::size_t>(*t.record.cls)];
            correction_.corrupted.total += 1;
            cls.total += 1;
            if (restored) {
                correction_.corrupted.hits += 1;
                cls.hits += 1;
            }
        }
    }

    const ConfusionCounts& counts() const { return counts_; }
    const CorrectionScores& correction() const { return correction_; }

private:
    bool ignore_case_;
    ConfusionCounts counts_;
    CorrectionScores correction_;
};

/// Joins outputs to triplets by id and scores exact-match correction.
inline CorrectionScores score_correction(std::span<const std::pair<std::string, std::string>> outputs,
                                         std::span<const Triplet> triplets, bool ignore_case = false) {
    std::unordered_map<std::string, std::string_view> by_id;
    for (const auto& [id, out] : outputs) {
        if (!by_id.emplace(id, out).second) throw InputError("duplicate output id \"" + id + "\"");
    }
    std::unordered_set<std::string> seen;
    Evaluation eval(ignore_case);
    for (const Triplet& t : triplets) {
        if (!seen.insert(t.id).second) throw InputError("duplicate triplet id \"" + t.id + "\"");
        auto it = by_id.find(t.id);
        if (it == by_id.end()) throw InputError("no output for id \"" + t.id + "\"");
        eval.add(t, it->second);
    }
    if (by_id.size() != seen.size()) {
        for (const auto& [id, out] : by_id) {
            if (!seen.count(id)) throw InputError("output id \"" + id + "\" has no triplet");
        }
    }
    return eval.correction();
}

// ---------------------------------------------------------------------------
// Report

struct EvalReport {
    ClassificationScores classification;
    CorrectionScores correction;

    bool operator==(const EvalReport&) const = default;
};

inline EvalReport make_report(const Evaluation& eval) {
    return EvalReport{scores_from_counts(eval.counts()), eval.correction()};
}

namespace detail {

inline nlohmann::json to_json(const ClassMetrics& m) {
    return {{"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"precision_undefined", m.precision_undefined},
            {"recall_undefined", m.recall_undefined}};
}

inline ClassMetrics class_metrics_from_json(const nlohmann::json& j) {
    return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>(),
            j.at("precision_undefined").get<bool>(), j.at("recall_undefined").get<bool>()};
}

inline nlohmann::json to_json(const Rate& r) {
    return {{"accuracy", r.value()}, {"hits", r.hits}, {"total", r.total}};
}

inline Rate rate_from_json(const nlohmann::json& j) {
    return {j.at("hits").get<std::uint64_t>(), j.at("total").get<std::uint64_t>()};
}

}  // namespace detail

inline nlohmann::json report_to_json(const EvalReport& r) {
    const ClassificationScores& c = r.classification;
    nlohmann::json per_class = nlohmann::json::object();
    for (CorruptionClass cls : kAllClasses) {
        per_class[std::string(to_string(cls))] = detail::to_json(r.correction.per_class[static_cast<std::size_t>(cls)]);
    }
    return nlohmann::json{
        {"counts", {{"tp", c.counts.tp}, {"fn", c.counts.fn}, {"fp", c.counts.fp}, {"tn", c.counts.tn}}},
        {"per_class", {{"inconsistent", detail::to_json(c.inconsistent)}, {"consistent", detail::to_json(c.consistent)}}},
        {"accuracy", c.accuracy},
        {"micro_f1", c.micro_f1},
        {"correction_accuracy_corrupted", detail::to_json(r.correction.corrupted)},
        {"correction_accuracy_clean", detail::to_json(r.correction.clean)},
        {"per_corruption_class_accuracy", std::move(per_class)},
    };
}

inline EvalReport report_from_json(const nlohmann::json& j) {
    try {
        EvalReport r;
        const nlohmann::json& counts = j.at("counts");
        r.classification.counts = {counts.at("tp").get<std::uint64_t>(), counts.at("fn").get<std::uint64_t>(),
                                   counts.at("fp").get<std::uint64_t>(), counts.at("tn").get<std::uint64_t>()};
        r.classification.inconsistent = detail::class_metrics_from_json(j.at("per_class").at("inconsistent"));
        r.classification.consistent = detail::class_metrics_from_json(j.at("per_class").at("consistent"));
        r.classification.accuracy = j.at("accuracy").get<double>();
        r.classification.micro_f1 = j.at("micro_f1").get<double>();
        r.correction.corrupted = detail::rate_from_json(j.at("correction_accuracy_corrupted"));
        r.correction.clean = detail::rate_from_json(j.at("correction_accuracy_clean"));
        for (CorruptionClass cls : kAllClasses) {
            r.correction.per_class[static_cast<std::size_t>(cls)] =
                detail::rate_from_json(j.at("per_corruption_class_accuracy").at(std::string(to_string(cls))));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("report schema violation: ") + e.what());
    }
}

/// Plain-text table in the layout of the usual consistency-checking table:
/// overall accuracy, then precision/recall/F1 for the corrupted
/// (inconsistent) and clean (consistent) subsets.
inline std::string render_table(const EvalReport& r) {
    const ClassificationScores& c = r.classification;
    std::string out;
    char line[160];
    const auto row = [&](const char* name, const char* acc, const ClassMetrics& m) {
        std::snprintf(line, sizeof line, "%-10s | %-12s | %6.4f%s %6.4f%s %6.4f\n", name, acc, m.precision,
                      m.precision_undefined ? "*" : " ", m.recall, m.recall_undefined ? "*" : " ", m.f1);
        out += line;
    };
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.2f%%", 100.0 * c.accuracy);
    out += "           | Overall Acc. | Consistency checking\n";
    out += "           |              |  Prec.   Recall   F1\n";
    out += "-----------+--------------+----------------------\n";
    row("Corrupted", acc, c.inconsistent);
    row("Clean", "", c.consistent);
    std::snprintf(line, sizeof line, "\nmicro-F1 %.4f   counts tp=%llu fn=%llu fp=%llu tn=%llu\n", c.micro_f1,
                  static_cast<unsigned long long>(c.counts.tp), static_cast<unsigned long long>(c.counts.fn),
                  static_cast<unsigned long long>(c.counts.fp), static_cast<unsigned long long>(c.counts.tn));
    out += line;
    const auto rate = [&](const std::string& name, const Rate& x) {
        std::snprintf(line, sizeof line, "%-30s %7.2f%%  (%llu/%llu)\n", name.c_str(), 100.0 * x.value(),
                      static_cast<unsigned long long>(x.hits), static_cast<unsigned long long>(x.total));
        out += line;
    };
    out += "\nCorrection accuracy\n";
    rate("corrupted (restored exactly)", r.correction.corrupted);
    rate("clean (left unchanged)", r.correction.clean);
    for (CorruptionClass cls : kAllClasses) {
        rate("  " + std::string(to_string(cls)), r.correction.per_class[static_cast<std::size_t>(cls)]);
    }
    if (c.inconsistent.precision_undefined || c.inconsistent.recall_undefined || c.consistent.precision_undefined ||
        c.consistent.recall_undefined) {
        out += "\n* zero denominator, reported as 0\n";
    }
    return out;
}

inline std::string serialize_report(const EvalReport& r) { return report_to_json(r).dump(2) + "\n"; }

/// Writes the JSON report to `path`.
inline void emit_report(const EvalReport& r, const std::filesystem::path& path) {
    if (r.classification.counts.total() == 0) throw InputError("refusing to emit a report over zero records");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open report file " + path.string() + " for writing");
    out << serialize_report(r);
    out.flush();
    if (!out) throw Error("failed writing report file " + path.string());
}

}  // namespace factfix
