#include "detection/detector.h"
#include "detection/trigger.h"
#include "doctest.h"
#include "support.h"

using namespace swi::detection;

namespace {

// Trigger oracle: replay the log and track the last keystroke and whether
// anything was typed since the last check.
bool replay(const std::vector<EditorEvent> &log, double now, double pause) {
    double last = -1e18;
    bool typed = false;
    for (const auto &e : log) {
        if (e.kind == EditorEventKind::keystroke) {
            last = e.time;
            typed = true;
        } else {
            typed = false;
        }
    }
    return typed && now - last >= pause;
}

} // namespace

TEST_SUITE("detection") {

TEST_CASE("pause trigger") {
    using K = EditorEventKind;
    CHECK(should_trigger({{1.0, K::keystroke}}, 4.0));
    CHECK_FALSE(should_trigger({{1.0, K::keystroke}}, 1.5));
    CHECK_FALSE(should_trigger({{1.0, K::keystroke}, {3.5, K::check}}, 6.0));
    CHECK_FALSE(should_trigger({}, 10.0));

    std::vector<std::vector<EditorEvent>> logs{
        {{0, K::keystroke}, {1, K::keystroke}, {4, K::check}},
        {{0, K::keystroke}, {4, K::check}, {5, K::keystroke}},
        {{0, K::check}},
        {{0, K::keystroke}, {0.5, K::keystroke}, {1.9, K::keystroke}},
    };
    for (const auto &log : logs)
        for (double now : {1.0, 2.0, 3.9, 4.0, 7.0, 9.0}) {
            CAPTURE(now);
            CHECK(should_trigger(log, now) == replay(log, now, 2.0));
        }
}

TEST_CASE("pause trigger fires once per burst") {
    PauseTrigger t;
    t.keystroke(0.0);
    CHECK_FALSE(t.poll(1.0));
    CHECK(t.poll(2.5));
    CHECK_FALSE(t.poll(8.0));
    t.keystroke(9.0);
    CHECK(t.poll(11.0));
}

TEST_CASE("constractd is flagged") {
    auto r = detect("I like how the art of constractd.", test::offline());
    REQUIRE(r.contexts.size() == 1);
    CHECK(r.contexts[0].attempt == "constractd");
    CHECK(r.contexts[0].target == "constructed");
    CHECK(r.contexts[0].span == std::pair<std::size_t, std::size_t>{22, 32});
    CHECK(r.contexts[0].sentence == "I like how the art of constractd.");
}

TEST_CASE("reeching is flagged with its sentence") {
    auto r = detect("She was reeching for the book.", test::offline());
    REQUIRE(r.contexts.size() == 1);
    CHECK(r.contexts[0].attempt == "reeching");
    CHECK(r.contexts[0].target == "reaching");
}

TEST_CASE("clean text yields an empty report") {
    CHECK(detect("The cat sat.", test::offline()).contexts.empty());
}

TEST_CASE("sentence splitting") {
    std::string doc = "One two. Three four! Five";
    CHECK(sentence_around(doc, 0) == "One two.");
    CHECK(sentence_around(doc, 10) == "Three four!");
    CHECK(sentence_around(doc, 22) == "Five");
}

TEST_CASE("context json round trip") {
    AttemptContext c{"reech", "reach", "I reech up.", "I reech up.", {2, 7}, true, {"reach", "teach"}};
    nlohmann::json j = c;
    CHECK(j.get<AttemptContext>() == c);
}

}
