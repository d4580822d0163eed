// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "factfix/evaluator.hpp"
#include "support/fixtures.hpp"

using namespace factfix;
using L = ConsistencyLabel;

namespace {

Triplet triplet(std::string id, std::string corrupted, std::string reference,
                std::optional<CorruptionClass> cls = std::nullopt) {
    Triplet t;
    t.id = std::move(id);
    t.document_id = t.id;
    t.corrupted = std::move(corrupted);
    t.reference = std::move(reference);
    t.record.cls = cls;
    return t;
}

}  // namespace

TEST(Normalize, CollapsesWhitespaceOnly) {
    EXPECT_EQ(normalize("A\tB\nC"), "A B C");
    EXPECT_EQ(normalize("  lead  and trail \n"), "lead and trail");
    EXPECT_EQ(normalize("Case, Punct."), "Case, Punct.");
    EXPECT_TRUE(same_text("Word  word", "Word word"));
    EXPECT_FALSE(same_text("Word", "word"));
    EXPECT_TRUE(same_text("Word", "word", true));
}

TEST(Classification, AnyEditIsInconsistent) {
    EXPECT_EQ(classify_from_edit("Same text.", "Same  text."), L::Consistent);
    EXPECT_EQ(classify_from_edit("Same text.", "Same text!"), L::Inconsistent);
}

// Reference counts: 5780 corrupted and 5710 clean items.
TEST(Classification, ReferenceCountArithmetic) {
    const ConfusionCounts c{5491, 289, 1485, 4225};
    EXPECT_EQ(c.tp + c.fn, 5780u);
    EXPECT_EQ(c.fp + c.tn, 5710u);
    const ClassificationScores s = scores_from_counts(c);
    EXPECT_NEAR(s.inconsistent.precision, 0.79, 0.01);
    EXPECT_NEAR(s.inconsistent.recall, 0.95, 0.01);
    EXPECT_NEAR(s.inconsistent.f1, 0.86, 0.01);
    EXPECT_NEAR(s.consistent.precision, 0.93, 0.01);
    EXPECT_NEAR(s.consistent.recall, 0.74, 0.01);
    EXPECT_NEAR(s.consistent.f1, 0.82, 0.01);
    EXPECT_NEAR(s.accuracy, 0.8438, 0.01);
    // Direct ratios, computed here rather than through the library.
    EXPECT_DOUBLE_EQ(s.inconsistent.precision, 5491.0 / 6976.0);
    EXPECT_DOUBLE_EQ(s.consistent.recall, 4225.0 / 5710.0);
    EXPECT_DOUBLE_EQ(s.accuracy, 9716.0 / 11490.0);
}

TEST(Classification, MicroF1EqualsAccuracyOnFuzzedVectors) {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 1 + rng() % 500;
        std::vector<L> pred(n), gold(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = rng() % 2 ? L::Inconsistent : L::Consistent;
            gold[i] = rng() % 3 ? L::Inconsistent : L::Consistent;
        }
        const ClassificationScores s = score_classification(pred, gold);
        EXPECT_EQ(s.micro_f1, s.accuracy);
        std::size_t agree = 0;
        for (std::size_t i = 0; i < n; ++i) agree += pred[i] == gold[i];
        EXPECT_DOUBLE_EQ(s.accuracy, static_cast<double>(agree) / static_cast<double>(n));
    }
}

// Relabeling which class is positive swaps the two per-class blocks.
TEST(Classification, ClassSwapSymmetry) {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 50; ++round) {
        const ConfusionCounts c{rng() % 100, rng() % 100, rng() % 100, rng() % 100 + 1};
        const ClassificationScores a = scores_from_counts(c);
        const ClassificationScores b = scores_from_counts(c.flipped());
        EXPECT_EQ(a.inconsistent, b.consistent);
        EXPECT_EQ(a.consistent, b.inconsistent);
        EXPECT_EQ(a.accuracy, b.accuracy);
    }
}

TEST(Classification, ZeroDenominatorsAreFlagged) {
    const ClassificationScores s = scores_from_counts({0, 0, 0, 10});
    EXPECT_TRUE(s.inconsistent.precision_undefined);
    EXPECT_TRUE(s.inconsistent.recall_undefined);
    EXPECT_EQ(s.inconsistent.f1, 0.0);
    EXPECT_FALSE(s.consistent.precision_undefined);
    EXPECT_EQ(s.consistent.precision, 1.0);
    EXPECT_EQ(s.accuracy, 1.0);
}

TEST(Classification, RejectsEmptyOrMismatchedInput) {
    const std::vector<L> one = {L::Consistent};
    const std::vector<L> two = {L::Consistent, L::Inconsistent};
    EXPECT_THROW(score_classification(one, two), InputError);
    EXPECT_THROW(score_classification(std::vector<L>{}, std::vector<L>{}), InputError);
    EXPECT_THROW(scores_from_counts({}), InputError);
}

TEST(Correction, ExactMatchWithPerClassBreakdown) {
    const std::vector<Triplet> ts = {
        triplet("a", "95 people.", "100 people.", CorruptionClass::Number),
        triplet("b", "They left.", "He left.", CorruptionClass::Pronoun),
        triplet("c", "Clean one.", "Clean one."),
        triplet("d", "Clean two.", "Clean two."),
    };
    const std::vector<std::pair<std::string, std::string>> outs = {
        {"d", "Clean  two."}, {"a", "100 people."}, {"b", "They left."}, {"c", "Changed."}};
    const CorrectionScores s = score_correction(outs, ts);
    EXPECT_EQ(s.corrupted, (Rate{1, 2}));
    EXPECT_EQ(s.clean, (Rate{1, 2}));
    EXPECT_EQ(s.per_class[1], (Rate{1, 1}));
    EXPECT_EQ(s.per_class[3], (Rate{0, 1}));
    EXPECT_EQ(s.per_class[0], (Rate{0, 0}));
}

TEST(Correction, IdJoinErrors) {
    const std::vector<Triplet> ts = {triplet("a", "x", "x"), triplet("b", "y", "y")};
    using Outs = std::vector<std::pair<std::string, std::string>>;
    EXPECT_THROW(score_correction(Outs{{"a", "x"}}, ts), InputError);
    EXPECT_THROW(score_correction(Outs{{"a", "x"}, {"a", "x"}, {"b", "y"}}, ts), InputError);
    EXPECT_THROW(score_correction(Outs{{"a", "x"}, {"b", "y"}, {"c", "z"}}, ts), InputError);
    const std::vector<Triplet> dup = {triplet("a", "x", "x"), triplet("a", "x", "x")};
    EXPECT_THROW(score_correction(Outs{{"a", "x"}}, dup), InputError);
}

TEST(Report, JsonRoundTripAndTable) {
    Evaluation eval;
    eval.add(triplet("a", "95 people.", "100 people.", CorruptionClass::Number), "100 people.");
    eval.add(triplet("b", "Clean.", "Clean."), "Clean.");
    eval.add(triplet("c", "Clean.", "Clean."), "Edited.");
    const EvalReport r = make_report(eval);
    EXPECT_EQ(r.classification.counts, (ConfusionCounts{1, 0, 1, 1}));
    const EvalReport back = report_from_json(nlohmann::json::parse(serialize_report(r)));
    EXPECT_EQ(back, r);
    const std::string table = render_table(r);
    EXPECT_NE(table.find("Corrupted"), std::string::npos);
    EXPECT_NE(table.find("66.67%"), std::string::npos);
    EXPECT_THROW(report_from_json(nlohmann::json::object()), SchemaError);
}

TEST(Report, EmitRefusesEmptyAndReportsPath) {
    testkit::TempDir dir;
    EXPECT_THROW(emit_report(EvalReport{}, dir / "r.json"), InputError);
    Evaluation eval;
    eval.add(triplet("a", "x", "x"), "x");
    const EvalReport r = make_report(eval);
    emit_report(r, dir / "r.json");
    EXPECT_EQ(testkit::read_file(dir / "r.json"), serialize_report(r));
    try {
        emit_report(r, dir / "missing" / "r.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
    }
}
