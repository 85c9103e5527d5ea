#include "common/errors.h"
#include "doctest.h"
#include "linguistics/analysis.h"
#include "linguistics/edit_script.h"
#include "linguistics/synthesis.h"
#include "support.h"

#include <algorithm>
#include <functional>

using namespace swi;
using namespace swi::linguistics;

namespace {

// Exhaustive minimal edit cost, no memoization.
std::size_t brute_edit(const std::vector<std::string> &a, std::size_t i, const std::vector<std::string> &b,
                       std::size_t j) {
    if (i == a.size())
        return b.size() - j;
    if (j == b.size())
        return a.size() - i;
    std::size_t best = brute_edit(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, brute_edit(a, i + 1, b, j) + 1);
    best = std::min(best, brute_edit(a, i, b, j + 1) + 1);
    return best;
}

WordProperties attempt_of(const std::string &attempt, const std::string &target) {
    return derive_attempt_properties(attempt, test::entry(target), test::resources().corpus);
}

} // namespace

TEST_SUITE("linguistics") {

TEST_CASE("reaching record matches the bundled lexicon") {
    auto p = synthesize_properties("reaching", "She was reaching for the book.", test::offline());
    CHECK(p.morphemes == std::vector<std::string>{"reach", "-ing"});
    CHECK(p.graphemes == std::vector<std::string>{"r", "ea", "ch", "i", "ng"});
    CHECK(p.phonemes == std::vector<std::string>{"/r/", "/iː/", "/tʃ/", "/ɪ/", "/ŋ/"});
    REQUIRE(p.etymology);
    CHECK(p.etymology->origin_language == "Old English");
    CHECK(p.etymology->root == "reccan");
    CHECK(p.context_sentence == "She was reaching for the book.");
}

TEST_CASE("single-letter word") {
    auto p = synthesize_properties("a", "a cat", test::offline());
    CHECK(p.morphemes == std::vector<std::string>{"a"});
    CHECK(p.graphemes == std::vector<std::string>{"a"});
    CHECK(p.phonemes.size() == 1);
    CHECK(p.prefixes.empty());
    CHECK(p.suffixes.empty());
}

TEST_CASE("constructed has base struct") {
    auto p = synthesize_properties("constructed", "The builder constructed the building.", test::offline());
    CHECK(p.morphemes == std::vector<std::string>{"con-", "struct", "-ed"});
    CHECK(p.bases == std::vector<std::string>{"struct"});
}

TEST_CASE("unknown word and bad characters") {
    CHECK_THROWS_AS(synthesize_properties("zzqx", "", test::offline()), UnknownWord);
    CHECK_THROWS_AS(synthesize_properties("re4ch", "", test::offline()), Error);
}

TEST_CASE("every lexicon entry synthesizes to a valid record") {
    for (const auto &word : test::resources().lexicon.entry_words()) {
        CAPTURE(word);
        WordProperties p;
        CHECK_NOTHROW(p = synthesize_properties(word, "", test::offline()));
        CHECK(check_invariants(p).empty());
    }
}

TEST_CASE("invariant violations are reported") {
    WordProperties p = test::entry("reach");
    p.phonemes.pop_back();
    p.bases = {"xyz"};
    auto errors = check_invariants(p);
    CHECK(errors.size() == 2);
    CHECK_THROWS_AS(validate(p), InvariantViolation);

    WordProperties q = test::entry("reach");
    q.morphemes = {"re", "a"};
    CHECK_FALSE(check_invariants(q).empty());
}

TEST_CASE("json round trip") {
    const auto &p = test::entry("reaching");
    nlohmann::json j = p;
    CHECK(j.get<WordProperties>() == p);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"word":"x","morphemes":"x"})").get<WordProperties>(), SchemaError);
    CHECK_THROWS_AS(tristate_from_string("maybe"), SchemaError);
}

TEST_CASE("grapheme/phoneme alignment of an exact spelling") {
    auto a = align({"r", "ea", "ch"}, {"/r/", "/iː/", "/tʃ/"}, test::resources().corpus);
    CHECK(a.cost == 0);
    REQUIRE(a.pairs.size() == 3);
    CHECK(a.pairs[1] == AlignedPair{"ea", "/iː/"});
}

TEST_CASE("grapheme diff reech vs reach is one substitution at position 1") {
    auto s = diff({"r", "ee", "ch"}, {"r", "ea", "ch"});
    auto edits = s.edits();
    REQUIRE(edits.size() == 1);
    CHECK(edits[0].kind == EditKind::substitute);
    CHECK(edits[0].source_pos == 1);
    CHECK(edits[0].source == "ee");
    CHECK(edits[0].target == "ea");
}

TEST_CASE("grapheme diff sine vs sign includes the silent g") {
    std::vector<std::string> a{"s", "i", "ne"}, b{"s", "i", "g", "n"};
    auto s = diff(a, b);
    CHECK(s.cost == brute_edit(a, 0, b, 0));
    auto edits = s.edits();
    CHECK(std::any_of(edits.begin(), edits.end(), [](const EditOp &op) { return op.target == "g"; }));
}

TEST_CASE("grapheme mismatch counts") {
    const auto &reach = test::entry("reach");
    CHECK(grapheme_mismatch_count(attempt_of("reech", "reach"), reach) == 1);
    CHECK(grapheme_mismatch_count(reach, reach) == 0);

    const auto &target = test::entry("constructed");
    auto attempt = attempt_of("constractd", "constructed");
    CHECK(grapheme_mismatch_count(attempt, target) == brute_edit(attempt.graphemes, 0, target.graphemes, 0));
}

TEST_CASE("edit distance agrees with the exhaustive oracle") {
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"kitten", "sitting"}, {"constractd", "constructed"}, {"", "abc"}, {"alot", "a lot"}, {"same", "same"}};
    for (const auto &[x, y] : pairs) {
        std::vector<std::string> a, b;
        for (char c : x)
            a.emplace_back(1, c);
        for (char c : y)
            b.emplace_back(1, c);
        CAPTURE(x);
        CHECK(edit_distance(x, y) == brute_edit(a, 0, b, 0));
        CHECK(diff_chars(x, y).cost == edit_distance(x, y));
    }
}

TEST_CASE("attempt properties keep the record invariants") {
    for (auto [a, t] : std::vector<std::pair<std::string, std::string>>{
             {"reech", "reach"}, {"constractd", "constructed"}, {"runing", "running"}, {"alot", "a lot"}}) {
        CAPTURE(a);
        auto p = attempt_of(a, t);
        CHECK(p.word == a);
        CHECK(check_invariants(p).empty());
    }
    auto reech = attempt_of("reech", "reach");
    CHECK(reech.graphemes == std::vector<std::string>{"r", "ee", "ch"});
    CHECK(phoneme_match(reech, test::entry("reach")) == doctest::Approx(1.0));
}

TEST_CASE("morpheme spans skip the word separator") {
    auto spans = morpheme_spans(test::entry("a lot"));
    REQUIRE(spans.size() == 2);
    CHECK(spans[1] == std::pair<std::size_t, std::size_t>{2, 5});
    auto c = morpheme_spans(test::entry("constructed"));
    CHECK(c[1] == std::pair<std::size_t, std::size_t>{3, 9});
}

TEST_CASE("corpus lookups") {
    const auto &corpus = test::resources().corpus;
    CHECK(corpus.attests("/iː/", "ea"));
    CHECK(corpus.attests("iː", "ee"));
    CHECK_FALSE(corpus.attests("/iː/", "zz"));
    CHECK(normalize_phoneme("/iː/") == "iː");
    auto ex = corpus.examples("/iː/", "ea");
    CHECK(std::find(ex.begin(), ex.end(), "teach") != ex.end());
    for (const auto &ph : corpus.phonemes())
        for (const auto &s : corpus.spellings(ph)) {
            CHECK_FALSE(s.grapheme.empty());
            if (!s.example.empty() && !is_silent(ph))
                CHECK(s.example.find(s.grapheme) != std::string::npos);
        }
}

}
