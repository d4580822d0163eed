// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "factfix/corpus.hpp"
#include "factfix/error.hpp"

// Corpus JSONL, one record per line:
//   {"id": str,
//    "document": {"text": str, "entities": [{"start": int, "end": int, "label": str}]},
//    "summary":  {"text": str, "entities": [...]}}
// Surfaces are not stored; they are derived from the text on load.
namespace factfix {

using json = nlohmann::json;

namespace detail {

inline std::string line_context(std::optional<std::size_t> line_no) {
    return line_no ? "line " + std::to_string(*line_no) + ": " : std::string();
}

inline const json& require(const json& obj, const char* key, const std::string& where, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(ctx + where + " is missing \"" + key + "\"");
    return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& where, const std::string& ctx) {
    const json& v = require(obj, key, where, ctx);
    if (!v.is_string()) throw SchemaError(ctx + where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::size_t require_offset(const json& obj, const char* key, const std::string& where, const std::string& ctx) {
    const json& v = require(obj, key, where, ctx);
    if (!v.is_number_unsigned()) throw SchemaError(ctx + where + "." + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

inline std::pair<std::string, std::vector<EntitySpan>> parse_part(const json& root, const char* part,
                                                                  const std::string& ctx) {
    const json& obj = require(root, part, "record", ctx);
    if (!obj.is_object()) throw SchemaError(ctx + std::string(part) + " must be an object");
    std::string text = require_string(obj, "text", part, ctx);
    try {
        utf8::decode(text);
    } catch (const Error& e) {
        throw SchemaError(ctx + part + ".text: " + e.what());
    }
    const json& ents = require(obj, "entities", part, ctx);
    if (!ents.is_array()) throw SchemaError(ctx + std::string(part) + ".entities must be an array");

    const utf8::CodepointIndex index(text);
    std::vector<EntitySpan> spans;
    spans.reserve(ents.size());
    for (std::size_t i = 0; i < ents.size(); ++i) {
        const std::string where = std::string(part) + ".entities[" + std::to_string(i) + "]";
        const json& e = ents[i];
        if (!e.is_object()) throw SchemaError(ctx + where + " must be an object");
        const std::size_t start = require_offset(e, "start", where, ctx);
        const std::size_t end = require_offset(e, "end", where, ctx);
        const std::string label_name = require_string(e, "label", where, ctx);
        const auto label = parse_label(label_name);
        if (!label) throw SchemaError(ctx + where + " has unknown label \"" + label_name + "\"");
        // Out-of-range spans keep an empty surface; validation reports them.
        const bool fits = start < end && end <= index.length();
        spans.push_back(EntitySpan{start, end, fits ? std::string(index.slice(start, end)) : std::string(), *label});
    }
    return {std::move(text), std::move(spans)};
}

inline json spans_to_json(const std::vector<EntitySpan>& spans) {
    json arr = json::array();
    for (const EntitySpan& s : spans) {
        arr.push_back(json{{"start", s.start}, {"end", s.end}, {"label", to_string(s.label)}});
    }
    return arr;
}

}  // namespace detail

/// Parses one corpus line against the schema without checking span
/// invariants. Use validate_record on the result to list every violation.
inline CorpusRecord parse_record_unvalidated(std::string_view line,
                                             std::optional<std::size_t> line_no = std::nullopt) {
    const std::string ctx = detail::line_context(line_no);
    json root;
    try {
        root = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(ctx + "malformed JSON: " + e.what());
    }
    if (!root.is_object()) throw SchemaError(ctx + "record must be a JSON object");

    CorpusRecord record;
    record.document.id = detail::require_string(root, "id", "record", ctx);
    if (record.document.id.empty()) throw SchemaError(ctx + "record id is empty");
    auto [doc_text, doc_spans] = detail::parse_part(root, "document", ctx);
    auto [sum_text, sum_spans] = detail::parse_part(root, "summary", ctx);
    record.document.text = std::move(doc_text);
    record.document.entities = std::move(doc_spans);
    record.summary.text = std::move(sum_text);
    record.summary.entities = std::move(sum_spans);
    return record;
}

/// Parses and fully validates one corpus line. Throws ParseError, SchemaError
/// or SpanError (naming the first offending span).
inline CorpusRecord parse_record(std::string_view line, std::optional<std::size_t> line_no = std::nullopt) {
    CorpusRecord record = parse_record_unvalidated(line, line_no);
    const ValidationReport report = validate_record(record);
    if (!report.ok()) throw SpanError(detail::line_context(line_no) + report.violations.front().message);
    return record;
}

inline json record_to_json(const CorpusRecord& record) {
    return json{{"id", record.document.id},
                {"document", {{"text", record.document.text}, {"entities", detail::spans_to_json(record.document.entities)}}},
                {"summary", {{"text", record.summary.text}, {"entities", detail::spans_to_json(record.summary.entities)}}}};
}

/// One JSONL line, without the trailing newline.
inline std::string serialize_record(const CorpusRecord& record) { return record_to_json(record).dump(); }

}  // namespace factfix
