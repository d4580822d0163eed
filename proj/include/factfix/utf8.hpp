// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "factfix/error.hpp"

// All offsets in the toolkit count Unicode scalar values, while text is
// stored as UTF-8. These helpers translate between the two.
namespace factfix::utf8 {

/// Decodes UTF-8 into scalar values. Throws Error on ill-formed input.
inline std::u32string decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    while (i < text.size()) {
        const unsigned char lead = byte(i);
        char32_t cp = 0;
        std::size_t len = 0;
        if (lead < 0x80) {
            cp = lead;
            len = 1;
        } else if ((lead & 0xE0) == 0xC0) {
            cp = lead & 0x1F;
            len = 2;
        } else if ((lead & 0xF0) == 0xE0) {
            cp = lead & 0x0F;
            len = 3;
        } else if ((lead & 0xF8) == 0xF0) {
            cp = lead & 0x07;
            len = 4;
        } else {
            throw Error("ill-formed UTF-8 at byte " + std::to_string(i));
        }
        if (i + len > text.size()) throw Error("truncated UTF-8 at byte " + std::to_string(i));
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char c = byte(i + k);
            if ((c & 0xC0) != 0x80) throw Error("ill-formed UTF-8 at byte " + std::to_string(i + k));
            cp = (cp << 6) | (c & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            throw Error("invalid scalar value at byte " + std::to_string(i));
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) append(out, cp);
    return out;
}

/// Number of scalar values in well-formed UTF-8.
inline std::size_t length(std::string_view text) {
    std::size_t n = 0;
    for (char c : text) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    }
    return n;
}

/// Byte offset of every scalar value boundary; `offsets()[length()] == bytes`.
class CodepointIndex {
public:
    explicit CodepointIndex(std::string_view text) : text_(text) {
        offsets_.reserve(text.size() + 1);
        for (std::size_t i = 0; i < text.size(); ++i) {
            if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets_.push_back(i);
        }
        offsets_.push_back(text.size());
    }

    std::size_t length() const { return offsets_.size() - 1; }
    std::size_t byte_offset(std::size_t cp) const { return offsets_.at(cp); }

    std::string_view slice(std::size_t start, std::size_t end) const {
        const std::size_t b = byte_offset(start);
        return text_.substr(b, byte_offset(end) - b);
    }

private:
    std::string_view text_;
    std::vector<std::size_t> offsets_;
};

/// Slice [start, end) in scalar values. Caller guarantees the range is in bounds.
inline std::string slice(std::string_view text, std::size_t start, std::size_t end) {
    return std::string(CodepointIndex(text).slice(start, end));
}

inline char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }
inline char32_t ascii_upper(char32_t c) { return (c >= U'a' && c <= U'z') ? c - 32 : c; }

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    }
    return out;
}

/// Letters, digits and anything outside ASCII count as word characters.
inline bool is_word_char(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') || c == U'_' || c >= 0x80;
}

inline bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0xA0;
}

}  // namespace factfix::utf8
