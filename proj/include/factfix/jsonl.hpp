// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "factfix/corpus_json.hpp"
#include "factfix/error.hpp"

namespace factfix {

/// Reads JSONL one line at a time, skipping blank lines and tracking the
/// 1-based line number of the last line returned.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(&in) {}

    std::optional<std::string> next() {
        std::string line;
        while (std::getline(*in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return line;
        }
        return std::nullopt;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::istream* in_;
    std::size_t line_no_ = 0;
};

/// Looks up document texts by id in a corpus stream. Lookups in corpus order
/// use constant memory; out-of-order lookups buffer the skipped documents.
class DocumentLookup {
public:
    explicit DocumentLookup(std::istream& corpus) : reader_(corpus) {}

    std::string get(const std::string& id) {
        if (auto it = pending_.find(id); it != pending_.end()) {
            std::string text = std::move(it->second);
            pending_.erase(it);
            return text;
        }
        while (auto line = reader_.next()) {
            CorpusRecord record = parse_record(*line, reader_.line_no());
            if (record.id() == id) return std::move(record.document.text);
            pending_.emplace(record.id(), std::move(record.document.text));
        }
        throw InputError("no document with id \"" + id + "\" in corpus");
    }

private:
    LineReader reader_;
    std::unordered_map<std::string, std::string> pending_;
};

}  // namespace factfix
