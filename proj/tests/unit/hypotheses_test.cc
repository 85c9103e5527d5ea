#include "analysis/diagnosis.h"
#include "analysis/features.h"
#include "common/errors.h"
#include "doctest.h"
#include "hypotheses/guard.h"
#include "hypotheses/templates.h"
#include "linguistics/analysis.h"
#include "support.h"

#include <string>

using namespace swi;
using namespace swi::hypotheses;

namespace {

nlohmann::json template_doc() { return nlohmann::json::parse(test::slurp(test::data_dir / "templates.json")); }

std::string thrown_message(const nlohmann::json &doc) {
    try {
        templates_from_json(doc);
    } catch (const SchemaError &e) {
        return e.what();
    }
    return "";
}

struct Pair {
    linguistics::WordProperties attempt;
    const linguistics::WordProperties &target;
    analysis::DiagnosticFeatures features;
};

Pair pair_of(const std::string &a, const std::string &t) {
    const auto &target = test::entry(t);
    auto attempt = linguistics::derive_attempt_properties(a, target, test::resources().corpus);
    return {attempt, target, analysis::compute_features(attempt, target, test::resources().rules)};
}

bool guard(const std::string &id, const Pair &p) {
    return evaluate_guard(find_template(test::resources().templates, id), p.features, p.target);
}

} // namespace

TEST_SUITE("hypotheses") {

TEST_CASE("bundled library has H1..H18") {
    const auto &lib = test::resources().templates;
    REQUIRE(lib.size() == 18);
    for (int i = 0; i < 18; ++i)
        CHECK(lib[i].id == "H" + std::to_string(i + 1));
    CHECK(find_template(lib, "H8").action == ActionBase::identify_graphemes);
    CHECK(find_template(lib, "H8").effect == LearningEffect::gpc_aligned);
}

TEST_CASE("missing template is rejected") {
    auto doc = template_doc();
    auto &list = doc["templates"];
    list.erase(list.begin() + 6);
    CHECK(thrown_message(doc).find("H7") != std::string::npos);
}

TEST_CASE("duplicate template id is rejected") {
    auto doc = template_doc();
    doc["templates"][6]["id"] = "H6";
    CHECK_THROWS_AS(templates_from_json(doc), DuplicateId);
}

TEST_CASE("unknown guard field is named") {
    auto doc = template_doc();
    doc["templates"][7]["guard"] = "phonem_match >= 0.9";
    CHECK(thrown_message(doc).find("phonem_match") != std::string::npos);
}

TEST_CASE("unknown evidence and warrant slots are rejected") {
    auto doc = template_doc();
    doc["templates"][0]["evidence"].push_back("target.colour");
    CHECK(thrown_message(doc).find("target.colour") != std::string::npos);

    doc = template_doc();
    doc["templates"][7]["warrant"]["params"].push_back("target.bases");
    CHECK_FALSE(thrown_message(doc).empty());
}

TEST_CASE("library json round trip") {
    const auto &lib = test::resources().templates;
    CHECK(templates_from_json(templates_to_json(lib)) == lib);
}

TEST_CASE("guard parse and print") {
    auto g = parse_guard("!(prefix_error || suffix_error) && phoneme_distance <= $epsilon && "
                         "grapheme_mismatch_count in {1, 2}");
    CHECK(parse_guard(print_guard(g)) == g);
    for (const auto &t : test::resources().templates)
        CHECK(parse_guard(print_guard(t.guard)) == t.guard);
    CHECK_THROWS_AS(parse_guard("prefix_error &&"), SchemaError);
    CHECK_THROWS_AS(parse_guard("phoneme_match >= $delta"), SchemaError);
    CHECK_THROWS_AS(parse_guard("prefix_error >= 3"), SchemaError);
    CHECK_THROWS_AS(parse_guard("meaning_understood == perhaps"), SchemaError);
}

TEST_CASE("worked guard examples") {
    auto reech = pair_of("reech", "reach");
    auto runing = pair_of("runing", "running");
    auto alot = pair_of("alot", "a lot");
    auto same = pair_of("reach", "reach");
    CHECK(guard("H8", reech));
    CHECK_FALSE(guard("H8", runing));
    CHECK_FALSE(guard("H8", alot));
    CHECK(guard("H5", runing));
    CHECK(guard("H7", alot));
    CHECK_FALSE(guard("H7", same));
}

TEST_CASE("homophone template needs homophones") {
    CHECK(test::entry("reach").homophones.empty());
    CHECK_FALSE(guard("H17", pair_of("reech", "reach")));
    CHECK(guard("H17", pair_of("there", "their")));
}

TEST_CASE("epsilon parameter moves the H8 boundary") {
    auto p = pair_of("reech", "reach");
    const auto &h8 = find_template(test::resources().templates, "H8");
    auto f = p.features;
    f.phoneme_match = 0.8;
    GuardParams tight{{"epsilon", 0.1}}, loose{{"epsilon", 0.25}};
    CHECK_FALSE(evaluate_guard(h8, f, p.target, tight));
    CHECK(evaluate_guard(h8, f, p.target, loose));
}

TEST_CASE("offline descriptor score follows the diagnosis") {
    auto p = pair_of("reech", "reach");
    detection::AttemptContext ctx{"reech", "reach", "I can reech the top shelf.", "", {0, 0}, false, {}};
    auto d = analysis::diagnose(p.attempt, p.target, ctx, test::offline(), test::resources().rules);
    const auto &lib = test::resources().templates;
    CHECK(score_descriptor(find_template(lib, "H8"), ctx, d, test::offline()) >= 0.8);

    // A category absent from the ranking scores zero.
    auto trimmed = d;
    trimmed.ranked_categories.clear();
    trimmed.ranked_categories.push_back({analysis::ErrorCategory::gpc_mismatch, 0.9, true});
    CHECK(score_descriptor(find_template(lib, "H7"), ctx, trimmed, test::offline()) == 0.0);
}

TEST_CASE("enum names round trip") {
    for (int i = 0; i <= static_cast<int>(LearningEffect::form_difference_noticed); ++i)
        CHECK(effect_from_string(to_string(static_cast<LearningEffect>(i))) == static_cast<LearningEffect>(i));
    for (int i = 0; i <= static_cast<int>(ActionBase::visual_contrast); ++i)
        CHECK(action_from_string(to_string(static_cast<ActionBase>(i))) == static_cast<ActionBase>(i));
    CHECK_THROWS_AS(effect_from_string("enlightened"), SchemaError);
}

}
