// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <iterator>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "factfix/corpus.hpp"
#include "factfix/utf8.hpp"

namespace factfix::text {

/// [start, end) in scalar values.
struct SentenceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const SentenceSpan&) const = default;
};

// Lowercased, without the trailing period.
inline constexpr std::string_view kAbbreviations[] = {
    "mr",  "mrs",  "ms",   "dr",  "prof", "sr",  "jr",  "st",   "gov", "sen", "rep", "gen", "col", "lt",
    "sgt", "capt", "cmdr", "adm", "maj",  "rev", "hon", "pres", "vs",  "etc", "inc", "ltd", "co",  "corp",
    "no",  "jan",  "feb",  "mar", "apr",  "jun", "jul", "aug",  "sep", "sept", "oct", "nov", "dec", "u.s",
    "u.k", "u.n",  "e.g",  "i.e", "a.m",  "p.m", "mt",  "ft",   "ave", "blvd", "approx", "dept", "est", "fig",
};

inline constexpr std::string_view kStopWords[] = {
    "a",       "about",   "above",  "after",  "again",   "against", "all",     "am",         "an",      "and",
    "any",     "are",     "as",     "at",     "be",      "because", "been",    "before",     "being",   "below",
    "between", "both",    "but",    "by",     "can",     "could",   "did",     "do",         "does",    "doing",
    "down",    "during",  "each",   "few",    "for",     "from",    "further", "had",        "has",     "have",
    "having",  "he",      "her",    "here",   "hers",    "herself", "him",     "himself",    "his",     "how",
    "i",       "if",      "in",     "into",   "is",      "it",      "its",     "itself",     "just",    "me",
    "more",    "most",    "my",     "myself", "no",      "nor",     "not",     "now",        "of",      "off",
    "on",      "once",    "only",   "or",     "other",   "our",     "ours",    "ourselves",  "out",     "over",
    "own",     "s",       "same",   "she",    "should",  "so",      "some",    "such",       "t",       "than",
    "that",    "the",     "their",  "theirs", "them",    "themselves", "then", "there",     "these",   "they",
    "this",    "those",   "through", "to",    "too",     "under",   "until",   "up",         "very",    "was",
    "we",      "were",    "what",   "when",   "where",   "which",   "while",   "who",        "whom",    "why",
    "will",    "with",    "would",  "you",    "your",    "yours",   "yourself",
};

inline bool is_stop_word(std::string_view lowered) {
    return std::find(std::begin(kStopWords), std::end(kStopWords), lowered) != std::end(kStopWords);
}

namespace detail {

inline bool is_closer(char32_t c) {
    return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x2019 || c == 0x201D;
}

inline bool is_opener(char32_t c) {
    return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == U'`' || c == 0x2018 || c == 0x201C;
}

inline bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

inline bool is_abbreviation(std::u32string_view cps, std::size_t period) {
    std::size_t b = period;
    while (b > 0 && !utf8::is_space(cps[b - 1])) --b;
    while (b < period && is_opener(cps[b])) ++b;
    if (b == period) return false;
    const std::string word = utf8::ascii_lower(utf8::encode(cps.substr(b, period - b)));
    return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), word) != std::end(kAbbreviations);
}

}  // namespace detail

/// Rule-based sentence boundaries: a run of . ! ? (plus closing quotes or
/// brackets), then whitespace, then an uppercase letter, an opening quote or
/// bracket, or a digit. A period ending a listed abbreviation never splits.
/// Returned spans are trimmed of surrounding whitespace.
inline std::vector<SentenceSpan> split_sentences(std::u32string_view cps) {
    std::vector<SentenceSpan> out;
    const std::size_t n = cps.size();
    std::size_t start = 0;
    while (start < n && utf8::is_space(cps[start])) ++start;

    const auto emit = [&](std::size_t from, std::size_t to) {
        while (to > from && utf8::is_space(cps[to - 1])) --to;
        if (to > from) out.push_back({from, to});
    };

    std::size_t i = start;
    while (i < n) {
        if (!detail::is_terminal(cps[i])) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && detail::is_terminal(cps[j])) ++j;
        while (j < n && detail::is_closer(cps[j])) ++j;
        if (j < n && !utf8::is_space(cps[j])) {
            i = j;
            continue;
        }
        std::size_t k = j;
        while (k < n && utf8::is_space(cps[k])) ++k;
        if (k == n) break;
        const char32_t next = cps[k];
        const bool opens = (next >= U'A' && next <= U'Z') || (next >= U'0' && next <= U'9') || detail::is_opener(next);
        const bool abbreviated = j == i + 1 && cps[i] == U'.' && detail::is_abbreviation(cps, i);
        if (opens && !abbreviated) {
            emit(start, j);
            start = k;
        }
        i = k;
    }
    emit(start, n);
    return out;
}

inline std::vector<SentenceSpan> split_sentences(std::string_view text) {
    return split_sentences(std::u32string_view(utf8::decode(text)));
}

/// Lowercased alphanumeric tokens of cps[range] that are not stop words and
/// do not overlap any of `exclude`.
inline std::vector<std::string> content_words(std::u32string_view cps, SentenceSpan range,
                                              const std::vector<EntitySpan>& exclude) {
    std::vector<std::string> out;
    std::size_t i = range.start;
    while (i < range.end) {
        if (!utf8::is_word_char(cps[i]) || cps[i] == U'_') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < range.end && utf8::is_word_char(cps[j]) && cps[j] != U'_') ++j;
        const bool inside = std::any_of(exclude.begin(), exclude.end(),
                                        [&](const EntitySpan& e) { return e.start < j && i < e.end; });
        if (!inside) {
            std::string token = utf8::ascii_lower(utf8::encode(cps.substr(i, j - i)));
            if (!is_stop_word(token)) out.push_back(std::move(token));
        }
        i = j;
    }
    return out;
}

namespace detail {

inline bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// "2,117" and "3.5" are single tokens: a separator between digits does not
// end a token.
inline bool joins_digits(std::u32string_view cps, std::size_t sep, SentenceSpan range) {
    return sep > range.start && sep + 1 < range.end && (cps[sep] == U',' || cps[sep] == U'.') &&
           is_digit(cps[sep - 1]) && is_digit(cps[sep + 1]);
}

}  // namespace detail

/// Case-insensitive, whole-token occurrence of `needle` inside cps[range].
inline bool contains_token_sequence(std::u32string_view cps, SentenceSpan range, std::string_view needle) {
    const std::u32string target = utf8::decode(utf8::ascii_lower(needle));
    if (target.empty() || target.size() > range.end - range.start) return false;
    for (std::size_t p = range.start; p + target.size() <= range.end; ++p) {
        bool match = true;
        for (std::size_t q = 0; q < target.size() && match; ++q) match = utf8::ascii_lower(cps[p + q]) == target[q];
        if (!match) continue;
        const std::size_t after = p + target.size();
        const bool left_ok = p == range.start ||
                             ((!utf8::is_word_char(cps[p - 1]) || !utf8::is_word_char(target.front())) &&
                              !detail::joins_digits(cps, p - 1, range));
        const bool right_ok = after == range.end ||
                              ((!utf8::is_word_char(cps[after]) || !utf8::is_word_char(target.back())) &&
                               !detail::joins_digits(cps, after, range));
        if (left_ok && right_ok) return true;
    }
    return false;
}

}  // namespace factfix::text
