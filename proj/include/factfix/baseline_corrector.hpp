// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "factfix/corpus.hpp"
#include "factfix/error.hpp"
#include "factfix/text.hpp"
#include "factfix/utf8.hpp"

// Reference-free post-editing: every summary sentence is aligned to the
// source sentence with the highest content-word overlap, and entity, number
// and date spans that disagree with that sentence are replaced when the
// sentence offers exactly one same-class alternative not already mentioned
// in the summary sentence. Pronouns are never edited.
namespace factfix {

/// shared / total; 0/0 counts as zero.
struct OverlapScore {
    std::size_t shared = 0;
    std::size_t total = 0;

    double value() const { return total == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(total); }

    friend bool operator<(const OverlapScore& a, const OverlapScore& b) {
        const std::uint64_t lhs = a.total == 0 ? 0 : static_cast<std::uint64_t>(a.shared) * std::max<std::size_t>(b.total, 1);
        const std::uint64_t rhs = b.total == 0 ? 0 : static_cast<std::uint64_t>(b.shared) * std::max<std::size_t>(a.total, 1);
        return lhs < rhs;
    }
    bool operator==(const OverlapScore&) const = default;
};

struct SentenceAlignment {
    std::size_t summary_sentence_index = 0;
    std::size_t source_sentence_index = 0;
    OverlapScore overlap_score;
};

struct Edit {
    EntitySpan span;  // in the input summary
    std::string replacement;
    CorruptionClass cls = CorruptionClass::Entity;
    std::size_t evidence = 0;  // source sentence index
};

struct CorrectorVerdict {
    AnnotatedSummary output;
    std::vector<Edit> edits;
    bool changed = false;
};

/// A document split into sentences with per-sentence content words, computed
/// once and reused across summary sentences.
class PreparedDocument {
public:
    explicit PreparedDocument(const AnnotatedDocument& doc)
        : doc_(&doc), cps_(utf8::decode(doc.text)), sentences_(text::split_sentences(std::u32string_view(cps_))) {
        words_.reserve(sentences_.size());
        for (const text::SentenceSpan& s : sentences_) {
            std::vector<std::string> w = text::content_words(cps_, s, doc.entities);
            std::sort(w.begin(), w.end());
            words_.push_back(std::move(w));
        }
    }

    const AnnotatedDocument& document() const { return *doc_; }
    std::u32string_view codepoints() const { return cps_; }
    const std::vector<text::SentenceSpan>& sentences() const { return sentences_; }
    const std::vector<std::string>& sorted_words(std::size_t sentence) const { return words_[sentence]; }

    /// Entity spans lying entirely inside the given sentence.
    std::vector<EntitySpan> entities_in(std::size_t sentence) const {
        const text::SentenceSpan& s = sentences_[sentence];
        std::vector<EntitySpan> out;
        for (const EntitySpan& e : doc_->entities) {
            if (e.start >= s.start && e.end <= s.end) out.push_back(e);
        }
        return out;
    }

private:
    const AnnotatedDocument* doc_;
    std::u32string cps_;
    std::vector<text::SentenceSpan> sentences_;
    std::vector<std::vector<std::string>> words_;
};

namespace detail {

inline std::size_t multiset_intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

inline bool same_surface(std::string_view a, std::string_view b) { return utf8::ascii_lower(a) == utf8::ascii_lower(b); }

}  // namespace detail

/// Aligns summary sentence `sentence` (a range of `summary_cps`) to the best
/// source sentence. Ties go to the earliest source sentence.
inline SentenceAlignment align(std::u32string_view summary_cps, text::SentenceSpan sentence,
                               const std::vector<EntitySpan>& summary_entities, const PreparedDocument& doc,
                               std::size_t summary_sentence_index = 0) {
    if (doc.sentences().empty()) throw InputError("document " + doc.document().id + " has no sentences");
    std::vector<std::string> words = text::content_words(summary_cps, sentence, summary_entities);
    std::sort(words.begin(), words.end());

    SentenceAlignment best{summary_sentence_index, 0, {0, words.size()}};
    for (std::size_t k = 0; k < doc.sentences().size(); ++k) {
        const OverlapScore score{detail::multiset_intersection_size(words, doc.sorted_words(k)), words.size()};
        if (k == 0 || best.overlap_score < score) {
            best.source_sentence_index = k;
            best.overlap_score = score;
        }
    }
    return best;
}

inline SentenceAlignment align(const AnnotatedSummary& summary, text::SentenceSpan sentence,
                               const AnnotatedDocument& document) {
    const PreparedDocument doc(document);
    const std::u32string cps = utf8::decode(summary.text);
    return align(cps, sentence, summary.entities, doc);
}

inline std::vector<Edit> propose_edits(const AnnotatedSummary& summary, const PreparedDocument& doc) {
    std::vector<Edit> edits;
    if (doc.sentences().empty()) return edits;
    const std::u32string cps = utf8::decode(summary.text);
    const std::vector<text::SentenceSpan> sentences = text::split_sentences(std::u32string_view(cps));

    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const text::SentenceSpan& sentence = sentences[si];
        const SentenceAlignment alignment = align(cps, sentence, summary.entities, doc, si);
        const std::size_t evidence = alignment.source_sentence_index;
        const text::SentenceSpan& source = doc.sentences()[evidence];
        const std::vector<EntitySpan> source_entities = doc.entities_in(evidence);

        for (const EntitySpan& span : summary.entities) {
            if (span.start < sentence.start || span.start >= sentence.end) continue;
            const auto cls = class_of(span.label);
            if (!cls || *cls == CorruptionClass::Pronoun) continue;
            if (text::contains_token_sequence(doc.codepoints(), source, span.surface)) continue;

            const EntitySpan* unique = nullptr;
            std::size_t count = 0;
            for (const EntitySpan& e : source_entities) {
                // Entities the summary sentence already mentions are not alternatives.
                if (class_of(e.label) == cls && !text::contains_token_sequence(cps, sentence, e.surface)) {
                    unique = &e;
                    ++count;
                }
            }
            if (count != 1 || detail::same_surface(unique->surface, span.surface)) continue;
            edits.push_back(Edit{span, unique->surface, *cls, evidence});
        }
    }
    return edits;
}

inline std::vector<Edit> propose_edits(const AnnotatedSummary& summary, const AnnotatedDocument& document) {
    return propose_edits(summary, PreparedDocument(document));
}

/// Applies the proposed edits right to left so earlier offsets stay valid.
inline CorrectorVerdict correct(const AnnotatedSummary& summary, const PreparedDocument& doc) {
    CorrectorVerdict verdict;
    verdict.edits = propose_edits(summary, doc);
    verdict.output = summary;

    std::vector<const Edit*> order;
    for (const Edit& e : verdict.edits) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const Edit* a, const Edit* b) { return a->span.start > b->span.start; });
    for (const Edit* e : order) {
        ReplacementResult r = apply_span_replacement(verdict.output.text, e->span, e->replacement);
        verdict.output.entities = rebase_spans(verdict.output.entities, e->span, r.span);
        verdict.output.text = std::move(r.text);
    }
    verdict.changed = verdict.output.text != summary.text;
    return verdict;
}

inline CorrectorVerdict correct(const AnnotatedSummary& summary, const AnnotatedDocument& document) {
    return correct(summary, PreparedDocument(document));
}

// Verdict JSONL: {"id", "corrected", "changed",
//   "edits": [{"start", "end", "original", "replacement", "class"}]}
inline nlohmann::json verdict_to_json(std::string_view id, const CorrectorVerdict& v) {
    nlohmann::json edits = nlohmann::json::array();
    for (const Edit& e : v.edits) {
        edits.push_back({{"start", e.span.start},
                         {"end", e.span.end},
                         {"original", e.span.surface},
                         {"replacement", e.replacement},
                         {"class", to_string(e.cls)}});
    }
    return nlohmann::json{{"id", id}, {"corrected", v.output.text}, {"changed", v.changed}, {"edits", std::move(edits)}};
}

}  // namespace factfix
