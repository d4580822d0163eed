// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "factfix/corpus.hpp"
#include "factfix/error.hpp"
#include "factfix/pronouns.hpp"
#include "factfix/rng.hpp"
#include "factfix/utf8.hpp"

// Artificial corruption of reference summaries. With probability alpha a
// record gets exactly one swap (entity, number, date or pronoun); otherwise
// the summary is kept as is. Every swap is recorded so it can be undone.
namespace factfix {

enum class InapplicablePolicy { ResampleOtherRules, EmitClean };

inline std::string_view to_string(InapplicablePolicy p) {
    return p == InapplicablePolicy::ResampleOtherRules ? "resample_other_rules" : "emit_clean";
}

inline std::optional<InapplicablePolicy> parse_policy(std::string_view s) {
    if (s == "resample_other_rules") return InapplicablePolicy::ResampleOtherRules;
    if (s == "emit_clean") return InapplicablePolicy::EmitClean;
    return std::nullopt;
}

struct CorruptorConfig {
    double alpha = 0.3;
    std::uint64_t master_seed = 0;
    std::array<double, 4> rule_weights = {1.0, 1.0, 1.0, 1.0};  // indexed by CorruptionClass
    InapplicablePolicy on_inapplicable = InapplicablePolicy::ResampleOtherRules;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0,1]");
        bool any_positive = false;
        for (double w : rule_weights) {
            if (!(w >= 0.0)) throw ConfigError("rule weights must be non-negative");
            any_positive = any_positive || w > 0.0;
        }
        if (!any_positive) throw ConfigError("at least one rule weight must be positive");
    }
};

/// Replacement taken from the source document: index into its entity list.
struct DocumentSpanRef {
    std::size_t entity_index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const DocumentSpanRef&) const = default;
};

/// Replacement taken from the pronoun lexicon.
struct LexiconRef {
    PronounCase pronoun_case = PronounCase::Subject;
    std::size_t form_index = 0;
    bool operator==(const LexiconRef&) const = default;
};

using Provenance = std::variant<std::monostate, DocumentSpanRef, LexiconRef>;

struct CorruptionRecord {
    std::optional<CorruptionClass> cls;  // nullopt: no-op, summary kept
    EntitySpan summary_span;             // original span in the reference summary
    std::string replacement_surface;
    Provenance provenance;
    std::uint64_t rng_trace = 0;  // per-record seed
    bool inapplicable = false;    // a corruption was drawn but nothing could be swapped
    std::string diagnostic;

    bool is_noop() const { return !cls.has_value(); }

    /// Where the replacement sits in the corrupted summary.
    EntitySpan replaced_span() const {
        return EntitySpan{summary_span.start, summary_span.start + utf8::length(replacement_surface),
                          replacement_surface, summary_span.label};
    }
};

struct Triplet {
    std::string id;
    std::string corrupted;
    std::string reference;
    std::string document_id;
    CorruptionRecord record;
};

struct CorruptionPlan {
    std::optional<CorruptionClass> rule;
    bool inapplicable = false;
};

struct SwapResult {
    AnnotatedSummary corrupted;  // text plus annotations carried across the swap
    CorruptionRecord record;
};

// ---------------------------------------------------------------------------
// Candidate enumeration

namespace detail {

/// Pronoun matches that can be replaced without breaking an annotation: they
/// either overlap nothing or coincide with an annotated PRONOUN span.
inline std::vector<PronounMatch> swappable_pronouns(std::string_view text, const std::vector<EntitySpan>& annotations) {
    std::vector<PronounMatch> out;
    for (PronounMatch& m : detect_pronouns(text)) {
        bool blocked = false;
        for (const EntitySpan& a : annotations) {
            const bool overlaps = a.start < m.span.end && m.span.start < a.end;
            const bool coincides = a.start == m.span.start && a.end == m.span.end && a.label == EntityLabel::PRONOUN;
            if (overlaps && !coincides) {
                blocked = true;
                break;
            }
        }
        if (!blocked) out.push_back(std::move(m));
    }
    return out;
}

/// Indices of document spans of `cls` whose surface differs from `surface`.
inline std::vector<std::size_t> replacement_candidates(const AnnotatedDocument& doc, CorruptionClass cls,
                                                       std::string_view surface) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < doc.entities.size(); ++i) {
        const EntitySpan& d = doc.entities[i];
        if (class_of(d.label) == cls && d.surface != surface) out.push_back(i);
    }
    return out;
}

/// Indices of summary spans of `cls` that have at least one candidate.
inline std::vector<std::size_t> swappable_summary_spans(const CorpusRecord& record, CorruptionClass cls) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < record.summary.entities.size(); ++i) {
        const EntitySpan& s = record.summary.entities[i];
        if (class_of(s.label) != cls) continue;
        if (!replacement_candidates(record.document, cls, s.surface).empty()) out.push_back(i);
    }
    return out;
}

}  // namespace detail

/// Whether each rule (indexed by CorruptionClass) has something to swap.
inline std::array<bool, 4> applicable_rules(const CorpusRecord& record) {
    std::array<bool, 4> out{};
    for (CorruptionClass c : {CorruptionClass::Entity, CorruptionClass::Number, CorruptionClass::Date}) {
        out[static_cast<std::size_t>(c)] = !detail::swappable_summary_spans(record, c).empty();
    }
    out[static_cast<std::size_t>(CorruptionClass::Pronoun)] =
        !detail::swappable_pronouns(record.summary.text, record.summary.entities).empty();
    return out;
}

// ---------------------------------------------------------------------------
// Planning

/// Decides whether and how to corrupt one record. The first draw decides
/// corruption with probability alpha; the second picks a rule by weight among
/// all positively weighted rules. An inapplicable pick either falls back to
/// the applicable rules (one more weighted draw) or yields a flagged no-op.
template <rng::IndexSampler S>
CorruptionPlan plan_corruption(const CorpusRecord& record, const CorruptorConfig& config, S& sampler) {
    if (!rng::bernoulli(sampler, config.alpha)) return {};

    const std::array<bool, 4> applicable = applicable_rules(record);
    const std::size_t first = rng::choose_weighted(sampler, std::span<const double>(config.rule_weights));
    if (applicable[first]) return {kAllClasses[first], false};
    if (config.on_inapplicable == InapplicablePolicy::EmitClean) return {std::nullopt, true};

    std::array<double, 4> remaining{};
    bool any = false;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (applicable[i] && config.rule_weights[i] > 0.0) {
            remaining[i] = config.rule_weights[i];
            any = true;
        }
    }
    if (!any) return {std::nullopt, true};
    return {kAllClasses[rng::choose_weighted(sampler, std::span<const double>(remaining))], false};
}

// ---------------------------------------------------------------------------
// Swaps

/// Replaces one summary span of `cls` with a same-class span from the source
/// document whose surface differs. The summary span is drawn uniformly among
/// spans that have a candidate, then the candidate uniformly among document
/// spans. The document surface is used verbatim.
template <rng::IndexSampler S>
SwapResult swap_entity_like(const CorpusRecord& record, CorruptionClass cls, S& sampler) {
    if (cls == CorruptionClass::Pronoun) throw InapplicableError("swap_entity_like does not handle pronouns");
    const std::vector<std::size_t> spans = detail::swappable_summary_spans(record, cls);
    if (spans.empty()) {
        throw InapplicableError("record " + record.id() + " has no swappable " + std::string(to_string(cls)) +
                                " span");
    }
    const EntitySpan& original = record.summary.entities[spans[sampler.uniform_index(spans.size())]];
    const std::vector<std::size_t> candidates = detail::replacement_candidates(record.document, cls, original.surface);
    const std::size_t pick = candidates[sampler.uniform_index(candidates.size())];
    const EntitySpan& source = record.document.entities[pick];

    ReplacementResult replaced = apply_span_replacement(record.summary.text, original, source.surface);
    SwapResult out;
    out.corrupted.entities = rebase_spans(record.summary.entities, original, replaced.span);
    out.corrupted.text = std::move(replaced.text);
    out.record.cls = cls;
    out.record.summary_span = original;
    out.record.replacement_surface = source.surface;
    out.record.provenance = DocumentSpanRef{pick, source.start, source.end};
    return out;
}

/// Replaces one pronoun with a different form of the same case class.
/// `annotations` are the summary's spans; pronouns inside other annotations
/// are left alone and all annotations are carried to the output.
template <rng::IndexSampler S>
SwapResult swap_pronoun(std::string_view summary_text, S& sampler, const std::vector<EntitySpan>& annotations = {}) {
    const std::vector<PronounMatch> matches = detail::swappable_pronouns(summary_text, annotations);
    if (matches.empty()) throw InapplicableError("summary has no swappable pronoun");
    const PronounMatch& chosen = matches[sampler.uniform_index(matches.size())];

    const auto forms = lexicon::forms_of(chosen.pronoun_case);
    std::vector<std::size_t> choices;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (!lexicon::same_form(forms[i], chosen.span.surface)) choices.push_back(i);
    }
    const std::size_t form_index = choices[sampler.uniform_index(choices.size())];
    const std::u32string cps = utf8::decode(summary_text);
    const std::string replacement = render_pronoun(forms[form_index], chosen.span.surface, cps, chosen.span.start);

    ReplacementResult replaced = apply_span_replacement(summary_text, chosen.span, replacement);
    SwapResult out;
    out.corrupted.entities = rebase_spans(annotations, chosen.span, replaced.span);
    out.corrupted.text = std::move(replaced.text);
    out.record.cls = CorruptionClass::Pronoun;
    out.record.summary_span = chosen.span;
    out.record.replacement_surface = replacement;
    out.record.provenance = LexiconRef{chosen.pronoun_case, form_index};
    return out;
}

/// Undoes a recorded swap. Throws MismatchError when the replacement is not
/// found at the recorded position.
inline std::string invert(std::string_view corrupted_summary, const CorruptionRecord& record) {
    if (record.is_noop()) return std::string(corrupted_summary);
    const EntitySpan at = record.replaced_span();
    const utf8::CodepointIndex index(corrupted_summary);
    if (at.end > index.length() || index.slice(at.start, at.end) != record.replacement_surface) {
        throw MismatchError("replacement \"" + record.replacement_surface + "\" not found at [" +
                            std::to_string(at.start) + ", " + std::to_string(at.end) + ")");
    }
    return apply_span_replacement(corrupted_summary, at, record.summary_span.surface).text;
}

// ---------------------------------------------------------------------------
// Dataset construction

struct CorruptedRecord {
    Triplet triplet;
    AnnotatedSummary corrupted_summary;
};

/// Builds the triplet for one record. Never throws for valid records; an
/// unexpected failure becomes a no-op carrying a diagnostic.
template <rng::IndexSampler S>
CorruptedRecord corrupt_record(const CorpusRecord& record, const CorruptorConfig& config, S& sampler) {
    CorruptedRecord out;
    out.triplet.id = record.id();
    out.triplet.document_id = record.id();
    out.triplet.reference = record.summary.text;
    out.triplet.corrupted = record.summary.text;
    out.corrupted_summary = record.summary;
    try {
        const CorruptionPlan plan = plan_corruption(record, config, sampler);
        if (!plan.rule) {
            out.triplet.record.inapplicable = plan.inapplicable;
            return out;
        }
        SwapResult swap = *plan.rule == CorruptionClass::Pronoun
                              ? swap_pronoun(record.summary.text, sampler, record.summary.entities)
                              : swap_entity_like(record, *plan.rule, sampler);
        out.triplet.corrupted = swap.corrupted.text;
        out.triplet.record = std::move(swap.record);
        out.corrupted_summary = std::move(swap.corrupted);
    } catch (const Error& e) {
        out.triplet.record = CorruptionRecord{};
        out.triplet.record.diagnostic = e.what();
        out.triplet.corrupted = record.summary.text;
        out.corrupted_summary = record.summary;
    }
    return out;
}

inline CorruptedRecord corrupt_record(const CorpusRecord& record, const CorruptorConfig& config) {
    rng::RecordRng sampler = rng::derive_record_rng(config.master_seed, record.id());
    CorruptedRecord out = corrupt_record(record, config, sampler);
    out.triplet.record.rng_trace = sampler.seed();
    return out;
}

/// Counts over a dataset. Merging is commutative and associative.
struct DatasetStats {
    std::uint64_t total = 0;
    std::uint64_t corrupted = 0;
    std::array<std::uint64_t, 4> per_class{};
    std::uint64_t inapplicable = 0;
    std::uint64_t errors = 0;

    void add(const Triplet& t) {
        ++total;
        if (t.record.cls) {
            ++corrupted;
            ++per_class[static_cast<std::size_t>(*t.record.cls)];
        }
        if (t.record.inapplicable) ++inapplicable;
        if (!t.record.diagnostic.empty()) ++errors;
    }

    DatasetStats& merge(const DatasetStats& o) {
        total += o.total;
        corrupted += o.corrupted;
        for (std::size_t i = 0; i < per_class.size(); ++i) per_class[i] += o.per_class[i];
        inapplicable += o.inapplicable;
        errors += o.errors;
        return *this;
    }

    std::uint64_t count(CorruptionClass c) const { return per_class[static_cast<std::size_t>(c)]; }
    bool operator==(const DatasetStats&) const = default;
};

struct Dataset {
    std::vector<CorruptedRecord> records;
    DatasetStats stats;
};

/// Corrupts every record, in input order. With `threads > 1` the work is
/// split into contiguous chunks; output is identical to the serial run.
inline Dataset build_dataset(std::span<const CorpusRecord> corpus, const CorruptorConfig& config,
                             unsigned threads = 1) {
    config.validate();
    Dataset out;
    out.records.resize(corpus.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, corpus.size()))));
    std::vector<DatasetStats> partial(threads);

    const auto work = [&](std::size_t worker) {
        const std::size_t begin = corpus.size() * worker / threads;
        const std::size_t end = corpus.size() * (worker + 1) / threads;
        for (std::size_t i = begin; i < end; ++i) {
            out.records[i] = corrupt_record(corpus[i], config);
            partial[worker].add(out.records[i].triplet);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    for (const DatasetStats& s : partial) out.stats.merge(s);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
//
// Triplet JSONL: {"id", "corrupted", "reference", "document_id",
//   "corruption": {"class": str|"none", "start", "end", "label", "original",
//                  "replacement", "inapplicable"}}
// A "diagnostic" key is added to "corruption" only when the record failed.

inline nlohmann::json triplet_to_json(const Triplet& t) {
    const CorruptionRecord& r = t.record;
    nlohmann::json corruption = {
        {"class", r.cls ? std::string(to_string(*r.cls)) : std::string("none")},
        {"start", r.cls ? r.summary_span.start : 0},
        {"end", r.cls ? r.summary_span.end : 0},
        {"label", r.cls ? std::string(to_string(r.summary_span.label)) : std::string()},
        {"original", r.cls ? r.summary_span.surface : std::string()},
        {"replacement", r.cls ? r.replacement_surface : std::string()},
        {"inapplicable", r.inapplicable},
    };
    if (!r.diagnostic.empty()) corruption["diagnostic"] = r.diagnostic;
    return nlohmann::json{{"id", t.id},
                          {"corrupted", t.corrupted},
                          {"reference", t.reference},
                          {"document_id", t.document_id},
                          {"corruption", std::move(corruption)}};
}

inline std::string serialize_triplet(const Triplet& t) { return triplet_to_json(t).dump(); }

namespace detail {

inline EntityLabel representative_label(CorruptionClass c) {
    switch (c) {
        case CorruptionClass::Entity: return EntityLabel::PERSON;
        case CorruptionClass::Number: return EntityLabel::CARDINAL;
        case CorruptionClass::Date: return EntityLabel::DATE;
        case CorruptionClass::Pronoun: return EntityLabel::PRONOUN;
    }
    return EntityLabel::PERSON;
}

}  // namespace detail

/// Reads a triplet line back. Provenance and seed are not serialized. A
/// missing "label" falls back to a representative label of the class.
inline Triplet parse_triplet(std::string_view line, std::optional<std::size_t> line_no = std::nullopt) {
    const std::string ctx = line_no ? "line " + std::to_string(*line_no) + ": " : std::string();
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ctx + "malformed JSON: " + e.what());
    }
    try {
        Triplet t;
        t.id = root.at("id").get<std::string>();
        t.corrupted = root.at("corrupted").get<std::string>();
        t.reference = root.at("reference").get<std::string>();
        t.document_id = root.at("document_id").get<std::string>();
        const nlohmann::json& c = root.at("corruption");
        const std::string cls = c.at("class").get<std::string>();
        t.record.inapplicable = c.at("inapplicable").get<bool>();
        if (auto d = c.find("diagnostic"); d != c.end()) t.record.diagnostic = d->get<std::string>();
        if (t.id.empty()) throw SchemaError(ctx + "triplet id is empty");
        if (cls != "none") {
            const auto parsed = parse_class(cls);
            if (!parsed) throw SchemaError(ctx + "unknown corruption class \"" + cls + "\"");
            t.record.cls = *parsed;
            EntityLabel label = detail::representative_label(*parsed);
            if (auto l = c.find("label"); l != c.end()) {
                const auto named = parse_label(l->get<std::string>());
                if (!named || class_of(*named) != parsed) {
                    throw SchemaError(ctx + "label " + l->dump() + " does not belong to class \"" + cls + "\"");
                }
                label = *named;
            }
            t.record.summary_span = EntitySpan{c.at("start").get<std::size_t>(), c.at("end").get<std::size_t>(),
                                               c.at("original").get<std::string>(), label};
            t.record.replacement_surface = c.at("replacement").get<std::string>();
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(ctx + "triplet schema violation: " + e.what());
    }
}

inline nlohmann::json stats_to_json(const DatasetStats& s) {
    nlohmann::json per_class = nlohmann::json::object();
    for (CorruptionClass c : kAllClasses) per_class[std::string(to_string(c))] = s.count(c);
    return nlohmann::json{{"total", s.total},
                          {"corrupted", s.corrupted},
                          {"clean", s.total - s.corrupted},
                          {"per_class", std::move(per_class)},
                          {"inapplicable", s.inapplicable},
                          {"errors", s.errors}};
}

}  // namespace factfix
