// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "factfix/corpus.hpp"
#include "factfix/utf8.hpp"

namespace factfix {

enum class PronounCase { Subject, Object, PossessiveDeterminer, PossessivePronoun, Reflexive };

inline std::string_view to_string(PronounCase c) {
    switch (c) {
        case PronounCase::Subject: return "subject";
        case PronounCase::Object: return "object";
        case PronounCase::PossessiveDeterminer: return "possessive-determiner";
        case PronounCase::PossessivePronoun: return "possessive-pronoun";
        case PronounCase::Reflexive: return "reflexive";
    }
    return "?";
}

namespace lexicon {

struct CaseClass {
    PronounCase pronoun_case;
    std::span<const std::string_view> forms;
};

inline constexpr std::array<std::string_view, 7> kSubject = {"I", "you", "he", "she", "it", "we", "they"};
inline constexpr std::array<std::string_view, 7> kObject = {"me", "you", "him", "her", "it", "us", "them"};
inline constexpr std::array<std::string_view, 7> kPossessiveDeterminer = {"my",  "your", "his",  "her",
                                                                          "its", "our",  "their"};
inline constexpr std::array<std::string_view, 7> kPossessivePronoun = {"mine", "yours", "his",   "hers",
                                                                       "its",  "ours",  "theirs"};
inline constexpr std::array<std::string_view, 8> kReflexive = {"myself",    "yourself",   "himself",    "herself",
                                                               "itself",    "ourselves",  "yourselves", "themselves"};

/// In priority order: an ambiguous form belongs to the first class listing it.
inline constexpr std::array<CaseClass, 5> kClasses = {{
    {PronounCase::Subject, kSubject},
    {PronounCase::Object, kObject},
    {PronounCase::PossessiveDeterminer, kPossessiveDeterminer},
    {PronounCase::PossessivePronoun, kPossessivePronoun},
    {PronounCase::Reflexive, kReflexive},
}};

inline std::span<const std::string_view> forms_of(PronounCase c) {
    return kClasses[static_cast<std::size_t>(c)].forms;
}

inline bool same_form(std::string_view a, std::string_view b) { return utf8::ascii_lower(a) == utf8::ascii_lower(b); }

/// Case class of a token, or nullopt if it is not a pronoun. Case-insensitive.
inline std::optional<PronounCase> case_of(std::string_view token) {
    for (const CaseClass& cls : kClasses) {
        for (std::string_view form : cls.forms) {
            if (same_form(form, token)) return cls.pronoun_case;
        }
    }
    return std::nullopt;
}

}  // namespace lexicon

struct PronounMatch {
    EntitySpan span;  // label PRONOUN
    PronounCase pronoun_case;
};

/// Whole-token, case-insensitive lexicon matches in `text`.
inline std::vector<PronounMatch> detect_pronouns(std::string_view text) {
    const std::u32string cps = utf8::decode(text);
    std::vector<PronounMatch> out;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (!utf8::is_word_char(cps[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && utf8::is_word_char(cps[j])) ++j;
        const std::string token = utf8::encode(std::u32string_view(cps).substr(i, j - i));
        if (auto c = lexicon::case_of(token)) {
            out.push_back({EntitySpan{i, j, token, EntityLabel::PRONOUN}, *c});
        }
        i = j;
    }
    return out;
}

/// True when `pos` starts the text or follows sentence-final punctuation.
inline bool sentence_initial(std::u32string_view cps, std::size_t pos) {
    std::size_t k = pos;
    while (k > 0 && (utf8::is_space(cps[k - 1]) || cps[k - 1] == U'"' || cps[k - 1] == U'\'' || cps[k - 1] == U'(')) {
        --k;
    }
    return k == 0 || cps[k - 1] == U'.' || cps[k - 1] == U'!' || cps[k - 1] == U'?';
}

/// Renders a lexicon form in place of `original`: the first character takes
/// the original's case. "I" carries no case signal, so for it the sentence
/// position decides; the form "I" itself is always capitalized.
inline std::string render_pronoun(std::string_view form, std::string_view original, std::u32string_view text,
                                  std::size_t position) {
    std::u32string out = utf8::decode(form);
    if (out.empty()) return {};
    if (lexicon::same_form(form, "I")) return "I";
    const std::u32string orig = utf8::decode(original);
    bool upper = !orig.empty() && utf8::ascii_upper(orig[0]) == orig[0] && utf8::ascii_lower(orig[0]) != orig[0];
    if (lexicon::same_form(original, "I")) upper = sentence_initial(text, position);
    out[0] = upper ? utf8::ascii_upper(out[0]) : utf8::ascii_lower(out[0]);
    return utf8::encode(out);
}

}  // namespace factfix
