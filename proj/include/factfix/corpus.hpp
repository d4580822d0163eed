// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factfix/error.hpp"
#include "factfix/utf8.hpp"

namespace factfix {

enum class EntityLabel {
    PERSON,
    ORG,
    GPE,
    NORP,
    LOC,
    FAC,
    EVENT,
    PRODUCT,
    WORK_OF_ART,
    CARDINAL,
    MONEY,
    PERCENT,
    QUANTITY,
    ORDINAL,
    DATE,
    TIME,
    PRONOUN,
};

inline constexpr std::array<std::string_view, 17> kLabelNames = {
    "PERSON",   "ORG",   "GPE",     "NORP",     "LOC",     "FAC",  "EVENT", "PRODUCT", "WORK_OF_ART",
    "CARDINAL", "MONEY", "PERCENT", "QUANTITY", "ORDINAL", "DATE", "TIME",  "PRONOUN",
};

inline std::string_view to_string(EntityLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

inline std::optional<EntityLabel> parse_label(std::string_view name) {
    for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
        if (kLabelNames[i] == name) return static_cast<EntityLabel>(i);
    }
    return std::nullopt;
}

/// The four swap families. Every label maps to at most one of them.
enum class CorruptionClass { Entity, Number, Date, Pronoun };

inline constexpr std::array<CorruptionClass, 4> kAllClasses = {
    CorruptionClass::Entity, CorruptionClass::Number, CorruptionClass::Date, CorruptionClass::Pronoun};

inline std::string_view to_string(CorruptionClass c) {
    switch (c) {
        case CorruptionClass::Entity: return "entity";
        case CorruptionClass::Number: return "number";
        case CorruptionClass::Date: return "date";
        case CorruptionClass::Pronoun: return "pronoun";
    }
    return "?";
}

inline std::optional<CorruptionClass> parse_class(std::string_view name) {
    for (CorruptionClass c : kAllClasses) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

inline std::optional<CorruptionClass> class_of(EntityLabel label) {
    switch (label) {
        case EntityLabel::PERSON:
        case EntityLabel::ORG:
        case EntityLabel::GPE:
        case EntityLabel::NORP:
        case EntityLabel::LOC:
        case EntityLabel::FAC:
        case EntityLabel::EVENT:
        case EntityLabel::PRODUCT:
        case EntityLabel::WORK_OF_ART: return CorruptionClass::Entity;
        case EntityLabel::CARDINAL:
        case EntityLabel::MONEY:
        case EntityLabel::PERCENT:
        case EntityLabel::QUANTITY:
        case EntityLabel::ORDINAL: return CorruptionClass::Number;
        case EntityLabel::DATE:
        case EntityLabel::TIME: return CorruptionClass::Date;
        case EntityLabel::PRONOUN: return CorruptionClass::Pronoun;
    }
    return std::nullopt;
}

/// A labelled [start, end) range of a text, offsets in scalar values.
/// `surface` is derived from the owning text at construction time.
struct EntitySpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string surface;
    EntityLabel label = EntityLabel::PERSON;

    std::size_t length() const { return end - start; }
    bool operator==(const EntitySpan&) const = default;
};

struct AnnotatedDocument {
    std::string id;
    std::string text;
    std::vector<EntitySpan> entities;

    bool operator==(const AnnotatedDocument&) const = default;
};

struct AnnotatedSummary {
    std::string text;
    std::vector<EntitySpan> entities;

    bool operator==(const AnnotatedSummary&) const = default;
};

struct CorpusRecord {
    AnnotatedDocument document;
    AnnotatedSummary summary;

    const std::string& id() const { return document.id; }
    bool operator==(const CorpusRecord&) const = default;
};

/// Builds a span over `text`, deriving its surface. Throws SpanError when
/// the range is empty or out of bounds.
inline EntitySpan make_span(std::string_view text, std::size_t start, std::size_t end, EntityLabel label) {
    const utf8::CodepointIndex index(text);
    if (start >= end || end > index.length()) {
        throw SpanError("span [" + std::to_string(start) + ", " + std::to_string(end) + ") " +
                        std::string(to_string(label)) + " does not fit text of length " +
                        std::to_string(index.length()));
    }
    return EntitySpan{start, end, std::string(index.slice(start, end)), label};
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    enum class Kind { EmptyId, OutOfBounds, SurfaceMismatch, Overlap, Unsorted };

    Kind kind;
    std::string part;  // "document" or "summary"
    std::size_t span_index = 0;
    std::optional<std::size_t> other_index;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string describe(const EntitySpan& s) {
    return std::string(to_string(s.label)) + " [" + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
}

inline void validate_spans(std::string_view part, std::string_view text, const std::vector<EntitySpan>& spans,
                           ValidationReport& report) {
    const utf8::CodepointIndex index(text);
    const std::string owner(part);
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const EntitySpan& s = spans[i];
        if (s.start >= s.end || s.end > index.length()) {
            report.violations.push_back({Violation::Kind::OutOfBounds, owner, i, std::nullopt,
                                         owner + " span #" + std::to_string(i) + " " + describe(s) +
                                             " does not fit text of length " + std::to_string(index.length())});
            continue;
        }
        if (index.slice(s.start, s.end) != s.surface) {
            report.violations.push_back({Violation::Kind::SurfaceMismatch, owner, i, std::nullopt,
                                         owner + " span #" + std::to_string(i) + " " + describe(s) + " surface \"" +
                                             s.surface + "\" != text slice \"" +
                                             std::string(index.slice(s.start, s.end)) + "\""});
        }
        if (i == 0) continue;
        const EntitySpan& prev = spans[i - 1];
        if (s.start < prev.start) {
            report.violations.push_back({Violation::Kind::Unsorted, owner, i, i - 1,
                                         owner + " span #" + std::to_string(i) + " " + describe(s) +
                                             " starts before span #" + std::to_string(i - 1) + " " + describe(prev)});
        } else if (s.start < prev.end) {
            report.violations.push_back({Violation::Kind::Overlap, owner, i, i - 1,
                                         owner + " spans #" + std::to_string(i - 1) + " " + describe(prev) + " and #" +
                                             std::to_string(i) + " " + describe(s) + " overlap"});
        }
    }
}

}  // namespace detail

/// Lists every invariant violation in `record`; an empty report means valid.
inline ValidationReport validate_record(const CorpusRecord& record) {
    ValidationReport report;
    if (record.document.id.empty()) {
        report.violations.push_back({Violation::Kind::EmptyId, "document", 0, std::nullopt, "record id is empty"});
    }
    detail::validate_spans("document", record.document.text, record.document.entities, report);
    detail::validate_spans("summary", record.summary.text, record.summary.entities, report);
    return report;
}

// ---------------------------------------------------------------------------
// Queries and edits

template <typename T>
concept Annotated = requires(const T& t) {
    { t.text } -> std::convertible_to<std::string>;
    { t.entities } -> std::convertible_to<std::vector<EntitySpan>>;
};

inline std::vector<EntitySpan> entities_of_class(const std::vector<EntitySpan>& spans, CorruptionClass cls) {
    std::vector<EntitySpan> out;
    std::copy_if(spans.begin(), spans.end(), std::back_inserter(out),
                 [cls](const EntitySpan& s) { return class_of(s.label) == cls; });
    return out;
}

template <Annotated T>
std::vector<EntitySpan> entities_of_class(const T& part, CorruptionClass cls) {
    return entities_of_class(part.entities, cls);
}

struct ReplacementResult {
    std::string text;
    EntitySpan span;
};

/// Replaces the slice under `span` with `replacement`. Everything outside the
/// span is left byte-identical; the returned span covers the replacement.
inline ReplacementResult apply_span_replacement(std::string_view text, const EntitySpan& span,
                                                std::string_view replacement) {
    const utf8::CodepointIndex index(text);
    if (span.start >= span.end || span.end > index.length()) {
        throw SpanError("span " + detail::describe(span) + " does not fit text of length " +
                        std::to_string(index.length()));
    }
    if (index.slice(span.start, span.end) != span.surface) {
        throw SpanError("span " + detail::describe(span) + " surface \"" + span.surface + "\" does not match text");
    }
    if (replacement.empty()) throw SpanError("replacement for " + detail::describe(span) + " is empty");

    const std::size_t begin_byte = index.byte_offset(span.start);
    const std::size_t end_byte = index.byte_offset(span.end);
    ReplacementResult out;
    out.text.reserve(text.size() - (end_byte - begin_byte) + replacement.size());
    out.text.append(text.substr(0, begin_byte));
    out.text.append(replacement);
    out.text.append(text.substr(end_byte));
    out.span = EntitySpan{span.start, span.start + utf8::length(replacement), std::string(replacement), span.label};
    return out;
}

/// Carries annotations across a single replacement of `old_span` by
/// `new_span`. A span equal in range to `old_span` becomes `new_span`; spans
/// after it shift. Throws SpanError when a span straddles the replaced range.
inline std::vector<EntitySpan> rebase_spans(const std::vector<EntitySpan>& spans, const EntitySpan& old_span,
                                            const EntitySpan& new_span) {
    std::vector<EntitySpan> out;
    out.reserve(spans.size());
    for (const EntitySpan& s : spans) {
        if (s.end <= old_span.start) {
            out.push_back(s);
        } else if (s.start >= old_span.end) {
            EntitySpan moved = s;
            moved.start = s.start - old_span.end + new_span.end;
            moved.end = s.end - old_span.end + new_span.end;
            out.push_back(std::move(moved));
        } else if (s.start == old_span.start && s.end == old_span.end) {
            EntitySpan replaced = new_span;
            replaced.label = s.label;
            out.push_back(std::move(replaced));
        } else {
            throw SpanError("span " + detail::describe(s) + " straddles replaced range " + detail::describe(old_span));
        }
    }
    return out;
}

}  // namespace factfix
