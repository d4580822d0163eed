// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "factfix/corpus.hpp"
#include "factfix/utf8.hpp"

// Test-only generator of annotated (document, summary) pairs. Documents are
// built from sentence templates; every sentence carries at most one span per
// swap class, and surfaces are unique within a document. Summaries copy one
// or two document sentences verbatim and may add a pronoun sentence.
namespace factfix::testkit {

namespace pools {

inline const std::vector<std::string> kPeople = {
    "Alice Moreno",   "Brian Okafor",  "Carla Jensen",   "David Lindqvist", "Elena Petrova",  "Farid Haddad",
    "Grace Whitfield", "Hiro Tanaka",  "Ines Duarte",    "Jonas Becker",    "Keiko Mori",     "Liam Gallagher",
    "Maya Sorensen",  "Nikos Pappas",  "Olivia Brandt",  "Pedro Alvarez",   "Quinn Harlow",   "Rosa Delgado",
    "Samuel Oduya",   "Tara Lindgren", "Umar Siddiqui",  "Vera Novak",      "Walter Crane",   "Ximena Rojas",
    "Yusuf Demir",    "Zoe Callahan",  "Arjun Mehta",    "Beatrix Kole",    "Cyrus Vance",    "Dalia Nasser",
};
inline const std::vector<std::string> kPlaces = {
    "Lisbon", "Nairobi", "Oslo",   "Santiago", "Hanoi",    "Toronto", "Krakow", "Dublin", "Lagos", "Quito",
    "Perth",  "Seville", "Tbilisi", "Denver",  "Istanbul", "Manila",  "Porto",  "Accra",  "Lyon",  "Osaka",
};
inline const std::vector<std::string> kOrgs = {
    "Harbor Trust",   "Northwind Labs", "Civic Energy",   "Bluefin Media", "Atlas Freight",
    "Meridian Health", "Granite Bank",  "Solstice Foods", "Vertex Rail",   "Lumen Schools",
    "Orchid Pharma",  "Pioneer Mills",  "Redwood Press",  "Summit Air",    "Tidewater Group",
};
inline const std::vector<std::string> kDates = {
    "Monday",     "Tuesday",     "Wednesday",  "Thursday",    "Friday",       "Saturday",     "Sunday",
    "last week",  "last month",  "last year",  "this spring", "this autumn",  "in January",   "in March",
    "in October", "in December", "yesterday",  "last winter", "next summer",  "in 2014",      "in 2019",
};
inline const std::vector<std::string> kVerbs = {
    "inspected", "approved", "rebuilt",   "questioned", "funded",    "delayed",  "expanded",  "reviewed",
    "announced", "defended", "abandoned", "launched",   "restored",  "measured", "described", "opposed",
    "promoted",  "shared",   "tested",    "designed",   "cancelled", "visited",  "welcomed",  "repaired",
};
inline const std::vector<std::string> kNouns = {
    "bridge",   "budget",   "harbor",    "clinic",  "pipeline", "festival", "library",  "reservoir", "stadium",
    "contract", "vaccine",  "railway",   "archive", "orchard",  "turbine",  "campus",   "museum",    "ferry",
    "reactor",  "warehouse", "satellite", "garden", "tunnel",   "hospital", "factory",  "airport",   "market",
    "volunteers", "engineers", "families", "farmers", "students", "nurses",  "workers",  "tourists",  "pilots",
};
inline const std::vector<std::string> kAdjectives = {
    "fragile", "overdue", "ambitious", "popular", "expensive", "temporary", "promising", "controversial",
};

}  // namespace pools

class SyntheticCorpus {
public:
    explicit SyntheticCorpus(std::uint64_t seed) : rng_(seed) {}

    CorpusRecord make(const std::string& id) {
        DocState st;
        const std::size_t n_sentences = 5 + pick(4);
        std::vector<std::vector<Piece>> sentences;
        for (std::size_t i = 0; i < n_sentences; ++i) sentences.push_back(make_sentence(st));

        CorpusRecord rec;
        rec.document.id = id;
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            if (i > 0) append(rec.document.text, rec.document.entities, {Piece{" "}});
            append(rec.document.text, rec.document.entities, sentences[i]);
        }

        std::vector<std::size_t> order(sentences.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng_);
        const std::size_t copies = 1 + pick(2);
        std::vector<std::size_t> chosen(order.begin(), order.begin() + copies);
        std::sort(chosen.begin(), chosen.end());
        bool first = true;
        for (std::size_t s : chosen) {
            if (!first) append(rec.summary.text, rec.summary.entities, {Piece{" "}});
            append(rec.summary.text, rec.summary.entities, sentences[s]);
            first = false;
        }
        if (pick(3) != 0) {
            append(rec.summary.text, rec.summary.entities, {Piece{" "}});
            append(rec.summary.text, rec.summary.entities, pronoun_sentence());
        }
        return rec;
    }

    std::vector<CorpusRecord> make_many(std::size_t n, std::string_view prefix = "syn-") {
        std::vector<CorpusRecord> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(make(std::string(prefix) + std::to_string(i)));
        return out;
    }

private:
    struct Piece {
        std::string text;
        std::optional<EntityLabel> label = std::nullopt;
    };

    struct DocState {
        std::vector<std::size_t> used_people, used_places, used_orgs, used_dates;
        std::vector<int> used_numbers;
    };

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    const std::string& word(const std::vector<std::string>& pool) { return pool[pick(pool.size())]; }

    std::string fresh(const std::vector<std::string>& pool, std::vector<std::size_t>& used) {
        for (;;) {
            const std::size_t i = pick(pool.size());
            if (std::find(used.begin(), used.end(), i) == used.end()) {
                used.push_back(i);
                return pool[i];
            }
        }
    }

    std::string fresh_number(DocState& st) {
        for (;;) {
            const int n = 11 + static_cast<int>(pick(989));
            if (std::find(st.used_numbers.begin(), st.used_numbers.end(), n) == st.used_numbers.end()) {
                st.used_numbers.push_back(n);
                return std::to_string(n);
            }
        }
    }

    std::vector<Piece> make_sentence(DocState& st) {
        const auto person = [&] { return Piece{fresh(pools::kPeople, st.used_people), EntityLabel::PERSON}; };
        const auto place = [&] { return Piece{fresh(pools::kPlaces, st.used_places), EntityLabel::GPE}; };
        const auto org = [&] { return Piece{fresh(pools::kOrgs, st.used_orgs), EntityLabel::ORG}; };
        const auto date = [&] { return Piece{fresh(pools::kDates, st.used_dates), EntityLabel::DATE}; };
        const auto number = [&] { return Piece{fresh_number(st), EntityLabel::CARDINAL}; };
        const auto w = [&](const std::vector<std::string>& pool) { return Piece{word(pool)}; };
        const auto t = [](std::string s) { return Piece{std::move(s)}; };

        switch (pick(4)) {
            case 0:
                return {person(), t(" "), w(pools::kVerbs), t(" the "), w(pools::kNouns), t(" near the "),
                        w(pools::kNouns), t(" "), date(), t(", and "), number(), t(" "), w(pools::kNouns),
                        t(" "), w(pools::kVerbs), t(" it.")};
            case 1:
                return {t("The "), w(pools::kNouns), t(" in "), place(), t(" "), w(pools::kVerbs), t(" "),
                        number(), t(" "), w(pools::kNouns), t(" "), date(), t(".")};
            case 2:
                return {org(), t(" "), w(pools::kVerbs), t(" the "), w(pools::kAdjectives), t(" "),
                        w(pools::kNouns), t(" after "), number(), t(" "), w(pools::kNouns), t(" "),
                        w(pools::kVerbs), t(" the "), w(pools::kNouns), t(".")};
            default:
                return {t("Officials "), w(pools::kVerbs), t(" the "), w(pools::kNouns), t(" "), date(),
                        t(", and "), person(), t(" "), w(pools::kVerbs), t(" the "), w(pools::kAdjectives),
                        t(" "), w(pools::kNouns), t(".")};
        }
    }

    std::vector<Piece> pronoun_sentence() {
        static const std::vector<std::string> subjects = {"He", "She", "They", "We", "It"};
        static const std::vector<std::string> objects = {"him", "her", "them", "us", "it"};
        const auto t = [](std::string s) { return Piece{std::move(s)}; };
        if (pick(2) == 0) {
            return {t(word(subjects)), t(" said the "), t(word(pools::kNouns)), t(" was "),
                    t(word(pools::kAdjectives)), t(".")};
        }
        return {t("Critics "), t(word(pools::kVerbs)), t(" "), t(word(objects)), t(" for the "),
                t(word(pools::kAdjectives)), t(" "), t(word(pools::kNouns)), t(".")};
    }

    static void append(std::string& text, std::vector<EntitySpan>& spans, const std::vector<Piece>& pieces) {
        for (const Piece& p : pieces) {
            const std::size_t start = utf8::length(text);
            text += p.text;
            if (p.label) spans.push_back(EntitySpan{start, start + utf8::length(p.text), p.text, *p.label});
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace factfix::testkit
