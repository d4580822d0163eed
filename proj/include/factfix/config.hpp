// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "factfix/corruptor.hpp"
#include "factfix/error.hpp"

namespace factfix {

/// Parses "e=1,n=1,d=1,p=1" (long names entity/number/date/pronoun also
/// accepted). Rules not mentioned get weight 0.
inline std::array<double, 4> parse_rule_weights(std::string_view text) {
    std::array<double, 4> out{};
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("rule weight \"" + std::string(item) + "\" is not key=value");
        const std::string key(item.substr(0, eq));
        const std::string value(item.substr(eq + 1));
        std::optional<CorruptionClass> cls = parse_class(key);
        if (key == "e") cls = CorruptionClass::Entity;
        if (key == "n") cls = CorruptionClass::Number;
        if (key == "d") cls = CorruptionClass::Date;
        if (key == "p") cls = CorruptionClass::Pronoun;
        if (!cls) throw ConfigError("unknown rule \"" + key + "\" in rule weights");
        char* end = nullptr;
        const double w = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0') throw ConfigError("rule weight \"" + value + "\" is not a number");
        out[static_cast<std::size_t>(*cls)] = w;
    }
    return out;
}

inline std::uint64_t parse_seed(std::string_view text) {
    const std::string s(text);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("seed \"" + s + "\" is not an unsigned integer");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ConfigError("seed \"" + s + "\" is out of range");
    return v;
}

inline double parse_alpha(std::string_view text) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ConfigError("alpha \"" + s + "\" is not a number");
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(std::string(key) + " must be true or false, got \"" + std::string(text) + "\"");
}

/// Every setting that can come from a flag or a config file. Unset fields
/// leave the layer below untouched.
struct ConfigOverlay {
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<std::array<double, 4>> rule_weights;
    std::optional<InapplicablePolicy> on_inapplicable;
    std::optional<bool> ignore_case;
    std::optional<std::string> in;
    std::optional<std::string> out;
    std::optional<std::string> stats;
    std::optional<std::string> triplets;
    std::optional<std::string> verdicts;
    std::optional<std::string> report;
    std::optional<std::string> corrupted_corpus;
    std::optional<std::string> external_cmd;
    std::optional<unsigned> threads;

    /// Fields set in `top` replace ours.
    void overlay(const ConfigOverlay& top) {
        const auto take = [](auto& dst, const auto& src) {
            if (src) dst = src;
        };
        take(alpha, top.alpha);
        take(seed, top.seed);
        take(rule_weights, top.rule_weights);
        take(on_inapplicable, top.on_inapplicable);
        take(ignore_case, top.ignore_case);
        take(in, top.in);
        take(out, top.out);
        take(stats, top.stats);
        take(triplets, top.triplets);
        take(verdicts, top.verdicts);
        take(report, top.report);
        take(corrupted_corpus, top.corrupted_corpus);
        take(external_cmd, top.external_cmd);
        take(threads, top.threads);
    }
};

/// Sets one key of `cfg` from its textual value. Keys use underscores;
/// hyphens are accepted as well.
inline void set_config_key(ConfigOverlay& cfg, std::string key, const std::string& value) {
    for (char& c : key) {
        if (c == '-') c = '_';
    }
    if (key == "alpha") {
        cfg.alpha = parse_alpha(value);
    } else if (key == "seed") {
        cfg.seed = parse_seed(value);
    } else if (key == "rule_weights") {
        cfg.rule_weights = parse_rule_weights(value);
    } else if (key == "on_inapplicable") {
        const auto p = parse_policy(value);
        if (!p) throw ConfigError("on_inapplicable must be resample_other_rules or emit_clean");
        cfg.on_inapplicable = *p;
    } else if (key == "ignore_case") {
        cfg.ignore_case = parse_bool(key, value);
    } else if (key == "in") {
        cfg.in = value;
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "stats") {
        cfg.stats = value;
    } else if (key == "triplets") {
        cfg.triplets = value;
    } else if (key == "verdicts") {
        cfg.verdicts = value;
    } else if (key == "report") {
        cfg.report = value;
    } else if (key == "corrupted_corpus") {
        cfg.corrupted_corpus = value;
    } else if (key == "external_cmd") {
        cfg.external_cmd = value;
    } else if (key == "threads") {
        const std::uint64_t n = parse_seed(value);
        if (n == 0 || n > 1024) throw ConfigError("threads must be in [1, 1024]");
        cfg.threads = static_cast<unsigned>(n);
    } else {
        throw ConfigError("unknown config key \"" + key + "\"");
    }
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Reads `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; values may be wrapped in double quotes.
inline ConfigOverlay load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    ConfigOverlay cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        try {
            set_config_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

}  // namespace factfix
