// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "factfix/baseline_corrector.hpp"
#include "factfix/corruptor.hpp"
#include "factfix/evaluator.hpp"
#include "support/fixtures.hpp"
#include "support/scripted_sampler.hpp"

using namespace factfix;

TEST(Golden, CruiseNumberCorruptionUnderForcedDraws) {
    const CorpusRecord rec = testkit::load_golden().at("golden-cruise");
    CorruptorConfig cfg;
    cfg.alpha = 0.3;
    // Corrupt (0.1 < 0.3), pick Number (0.3 * 4 = 1.2 falls in the second
    // slot), first Number span, second candidate.
    testkit::ScriptedSampler s{{0, 1}, {0.1, 0.3}};
    const CorruptedRecord out = corrupt_record(rec, cfg, s);
    EXPECT_EQ(out.triplet.corrupted,
              "95 passengers and crew members have been sickened on Celebrity Infinity. The ship, which is based on "
              "the West Coast, left San Diego in late March.");
    EXPECT_EQ(out.triplet.reference, rec.summary.text);
    EXPECT_EQ(out.triplet.record.cls, CorruptionClass::Number);
    EXPECT_EQ(invert(out.triplet.corrupted, out.triplet.record), rec.summary.text);
    const auto& ref = std::get<DocumentSpanRef>(out.triplet.record.provenance);
    EXPECT_EQ(rec.document.entities[ref.entity_index].surface, "95");
}

TEST(Golden, MemorialDayCorrection) {
    const CorpusRecord rec = testkit::load_golden().at("golden-memorial");
    const CorrectorVerdict v = correct(rec.summary, rec.document);
    EXPECT_EQ(v.output.text, "Israel's memorial day commemoration is for bereaved family members as braham.");
    EXPECT_EQ(classify_from_edit(rec.summary.text, v.output.text), ConsistencyLabel::Inconsistent);
}

TEST(Golden, EveryFixtureRoundTrips) {
    for (const auto& [id, rec] : testkit::load_golden()) {
        EXPECT_EQ(parse_record(serialize_record(rec)), rec) << id;
    }
}
