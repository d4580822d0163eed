// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "factfix/external.hpp"

using namespace factfix;
using namespace factfix::external;

namespace {

std::vector<ExternalBatchItem> batch(std::size_t n) {
    std::vector<ExternalBatchItem> items;
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back(ExternalBatchItem::make("id-" + std::to_string(i), "Summary " + std::to_string(i) + ".",
                                                "Document \"quoted\"\nwith a newline."));
    }
    return items;
}

std::string expect_throw_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected an exception";
    return {};
}

}  // namespace

TEST(External, ItemCarriesSeparatedInput) {
    const ExternalBatchItem item = ExternalBatchItem::make("a", "S.", "D.");
    EXPECT_EQ(item.input_text, "S.\n<::SEP::>\nD.");
    const auto j = item_to_json(item);
    EXPECT_EQ(j["input_text"], "S.\n<::SEP::>\nD.");
    EXPECT_EQ(j["summary"], "S.");
}

TEST(External, EchoRoundTripInChildOrder) {
    const auto items = batch(50);
    const auto verdicts = run_process(FACTFIX_ECHO_CORRECTOR, items);
    ASSERT_EQ(verdicts.size(), items.size());
    for (std::size_t i = 0; i < items.size(); ++i) EXPECT_EQ(verdicts[i].corrected, items[i].summary);
}

TEST(External, PermutedOutputIsAccepted) {
    // `tac` reverses the echoed lines after the child has read everything.
    const auto items = batch(20);
    const auto verdicts = run_process(std::string(FACTFIX_ECHO_CORRECTOR) + " | tac", items);
    ASSERT_EQ(verdicts.size(), items.size());
    EXPECT_EQ(verdicts.front().id, "id-19");
}

TEST(External, LargeBatchDoesNotDeadlock) {
    std::vector<ExternalBatchItem> items;
    const std::string doc(20000, 'x');
    for (int i = 0; i < 300; ++i) items.push_back(ExternalBatchItem::make("k" + std::to_string(i), "S.", doc));
    EXPECT_EQ(run_process(FACTFIX_ECHO_CORRECTOR, items).size(), items.size());
}

TEST(External, NonzeroExitCarriesStderr) {
    const std::string msg =
        expect_throw_message([] { run_process("cat >/dev/null; echo model crashed >&2; exit 3", batch(3)); });
    EXPECT_NE(msg.find("status 3"), std::string::npos);
    EXPECT_NE(msg.find("model crashed"), std::string::npos);
    EXPECT_THROW(run_process("exit 4", batch(3)), ExternalError);
}

TEST(External, ProtocolViolations) {
    EXPECT_THROW(run_process("cat >/dev/null; echo 'not json'", batch(1)), ProtocolError);
    EXPECT_THROW(run_process("cat >/dev/null; echo '{\"id\":\"id-0\"}'", batch(1)), ProtocolError);
    EXPECT_THROW(run_process("cat >/dev/null; echo '{\"id\":\"zzz\",\"corrected\":\"x\"}'", batch(1)), ProtocolError);
    const std::string dup = "cat >/dev/null; echo '{\"id\":\"id-0\",\"corrected\":\"x\"}'; "
                            "echo '{\"id\":\"id-0\",\"corrected\":\"x\"}'";
    EXPECT_THROW(run_process(dup, batch(1)), ProtocolError);
    const std::string missing = expect_throw_message([] {
        run_process(std::string(FACTFIX_ECHO_CORRECTOR) + " | head -n 2", batch(3));
    });
    EXPECT_NE(missing.find("id-2"), std::string::npos);
}

TEST(External, ChildThatIgnoresInput) {
    // The child exits without reading; writes fail with EPIPE, not SIGPIPE.
    EXPECT_THROW(run_process("true", batch(2000)), ProtocolError);
}

TEST(External, DuplicateInputIdsAreRejected) {
    std::vector<ExternalBatchItem> items = batch(2);
    items[1].id = items[0].id;
    EXPECT_THROW(run_process(FACTFIX_ECHO_CORRECTOR, items), InputError);
}

TEST(External, ParseVerdictLine) {
    const ExternalVerdict v = parse_verdict_line(R"({"id":"a","corrected":"b","extra":1})", 1);
    EXPECT_EQ(v.id, "a");
    EXPECT_EQ(v.corrected, "b");
    EXPECT_THROW(parse_verdict_line("[1]", 1), ProtocolError);
    EXPECT_THROW(parse_verdict_line(R"({"id":1,"corrected":"b"})", 1), ProtocolError);
}
