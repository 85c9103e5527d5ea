#include "common/errors.h"
#include "doctest.h"
#include "hypotheses/guard.h"
#include "planner/config.h"
#include "planner/filter.h"
#include "planner/generator.h"
#include "planner/legality.h"
#include "planner/selector.h"
#include "planner/unify.h"
#include "support.h"

#include <algorithm>

using namespace swi;
using namespace swi::planner;

namespace {

std::vector<std::string> ids_of(const std::vector<FilteredHypothesis> &f) {
    std::vector<std::string> out;
    for (const auto &h : f)
        out.push_back(h.tmpl->id);
    return out;
}

bool has(const std::vector<std::string> &v, const std::string &x) { return std::find(v.begin(), v.end(), x) != v.end(); }

bool has_trace(const std::vector<InquiryTrace> &traces, const std::vector<std::string> &ids) {
    return std::any_of(traces.begin(), traces.end(), [&](const InquiryTrace &t) { return t.template_ids() == ids; });
}

LegalityContext legality_for(const pipeline::Analysis &a) {
    std::set<std::string> available;
    for (const auto &h : a.filtered)
        available.insert(h.tmpl->id);
    return {test::resources().templates, test::resources().taxonomy, a.diagnosis.implicated(), available,
            test::resources().config};
}

InquiryStep step(const std::string &id, double confidence, std::vector<std::string> evidence) {
    InquiryStep s;
    s.template_id = id;
    s.confidence = confidence;
    for (const auto &e : evidence)
        s.evidence[e] = true;
    return s;
}

InquiryTrace trace_of(std::vector<InquiryStep> steps) {
    InquiryTrace t;
    t.steps = std::move(steps);
    return t;
}

} // namespace

TEST_SUITE("planner") {

TEST_CASE("unification binds and tests variables") {
    FactBase facts{{"count", 2}, {"flag", true}, {"name", "x"}};
    Rule r;
    Clause c;
    c.patterns = {{"count", Term::var("?n")}, {"flag", Term::ground(true)}};
    c.constraints.push_back({Constraint::Kind::compare, "?n", hypotheses::CompareOp::ge, {2.0, ""}, {}});
    r.clauses.push_back(c);
    auto b = unify(r, facts);
    REQUIRE(b);
    CHECK(b->at("?n") == 2);

    r.clauses[0].constraints[0].operand = {0.0, "limit"};
    CHECK_FALSE(unify(r, facts, {{"limit", 3.0}}));
    CHECK(unify(r, facts, {{"limit", 1.0}}));

    CHECK_FALSE(unify(Rule{}, facts));
    Clause missing;
    missing.patterns = {{"absent", Term::var("?x")}};
    CHECK_FALSE(unify(Rule{{missing}}, facts));
}

TEST_CASE("compiled guards agree with direct evaluation") {
    auto a = test::analyze_pair("constractd", "constructed");
    planner::WordPair words{a.attempt, a.target};
    auto facts = build_facts(a.diagnosis.features, words);
    for (const auto &text : {"prefix_error || !suffix_error", "!(grapheme_mismatch_count in {1, 2} && has_etymology)",
                             "phoneme_distance <= $epsilon || morphemes_affected > 1",
                             "!(meaning_understood == yes) && base_count == 1"}) {
        CAPTURE(text);
        auto g = hypotheses::parse_guard(text);
        CHECK(unify(compile_guard(g), facts).has_value() ==
              hypotheses::evaluate(g, a.diagnosis.features, a.target));
    }
}

TEST_CASE("reech filter") {
    auto ids = ids_of(test::analyze_pair("reech", "reach").filtered);
    CHECK(has(ids, "H8"));
    CHECK(has(ids, "H14"));
    CHECK(has(ids, "H10"));
    CHECK_FALSE(has(ids, "H5"));
    CHECK_FALSE(has(ids, "H7"));
}

TEST_CASE("constractd filter") {
    auto ids = ids_of(test::analyze_pair("constractd", "constructed").filtered);
    for (const char *id : {"H1", "H3", "H8", "H10"})
        CHECK(has(ids, id));
}

TEST_CASE("no error, no hypotheses") {
    const auto &reach = test::entry("reach");
    WordPair words{reach, reach};
    analysis::ErrorDiagnosis d;
    detection::AttemptContext ctx{"reach", "reach", reach.context_sentence, "", {0, 0}, false, {}};
    CHECK(filter_hypotheses(test::resources().templates, d, words, ctx, test::offline()).empty());
}

TEST_CASE("filtered confidence blends the descriptor score") {
    auto a = test::analyze_pair("reech", "reach");
    for (const auto &h : a.filtered) {
        CHECK(h.confidence == doctest::Approx(h.descriptor_score * test::resources().config.descriptor_weight +
                                              (1 - test::resources().config.descriptor_weight)));
        CHECK(h.evidence.is_object());
    }
}

TEST_CASE("reech traces include meaning, grapheme contrast, family") {
    auto a = test::analyze_pair("reech", "reach");
    CHECK(has_trace(a.candidates, {"H1", "H8", "H10"}));
}

TEST_CASE("constractd traces include the scenario order") {
    auto a = test::analyze_pair("constractd", "constructed");
    CHECK(has_trace(a.candidates, {"H1", "H3", "H8", "H10"}));
    CHECK(a.selection.trace.template_ids() == std::vector<std::string>{"H1", "H3", "H8", "H10"});
}

TEST_CASE("candidate traces are legal, bounded and diverse") {
    for (auto [at, tg] : std::vector<std::pair<std::string, std::string>>{
             {"constractd", "constructed"}, {"runing", "running"}, {"alot", "a lot"}, {"walkt", "walked"}}) {
        CAPTURE(at);
        auto a = test::analyze_pair(at, tg);
        auto ctx = legality_for(a);
        REQUIRE_FALSE(a.candidates.empty());
        CHECK(a.candidates.size() <= 3);
        for (std::size_t i = 0; i < a.candidates.size(); ++i) {
            const auto &t = a.candidates[i];
            CHECK(t.steps.size() >= 2);
            CHECK(t.steps.size() <= 5);
            CHECK(check_trace(t, ctx).empty());
            CHECK_FALSE(t.rationale.empty());
            for (std::size_t j = 0; j < i; ++j)
                CHECK(jaccard(t.template_ids(), a.candidates[j].template_ids()) <= 0.8);
        }
    }
}

TEST_CASE("legality check reports broken traces") {
    auto a = test::analyze_pair("constractd", "constructed");
    auto ctx = legality_for(a);
    const auto good = a.selection.trace;
    REQUIRE(check_trace(good, ctx).empty());

    auto swapped = good;
    std::swap(swapped.steps[0], swapped.steps[1]);
    std::swap(swapped.achieved_effects[0], swapped.achieved_effects[1]);
    CHECK_FALSE(check_trace(swapped, ctx).empty());

    auto short_trace = good;
    short_trace.steps.resize(1);
    short_trace.achieved_effects.resize(1);
    CHECK_FALSE(check_trace(short_trace, ctx).empty());

    auto repeated = good;
    repeated.steps[2] = repeated.steps[1];
    repeated.achieved_effects[2] = repeated.achieved_effects[1];
    CHECK_FALSE(check_trace(repeated, ctx).empty());

    auto unfiltered = good;
    unfiltered.steps.back().template_id = "H7";
    unfiltered.achieved_effects.back() = "boundaries_restored";
    CHECK_FALSE(check_trace(unfiltered, ctx).empty());

    auto wrong_effects = good;
    wrong_effects.achieved_effects.pop_back();
    CHECK_FALSE(check_trace(wrong_effects, ctx).empty());
}

TEST_CASE("diverse top-k") {
    std::map<std::string, double> conf{{"H1", 0.9}, {"H3", 0.8}, {"H8", 0.7}, {"H10", 0.6}};
    std::vector<std::vector<std::string>> seqs{{"H1", "H3", "H8", "H10"}, {"H1", "H3", "H8"}, {"H1", "H10"}};
    auto top = top_k_diverse(seqs, conf, 3, 0.8);
    REQUIRE(top.size() == 3);
    CHECK(top[0].ids == seqs[0]);
    CHECK(top[0].total_confidence == doctest::Approx(3.0));
    auto strict = top_k_diverse(seqs, conf, 3, 0.5);
    // {H1,H3,H8} vs {H1,H3,H8,H10} = 0.75 > 0.5 is dropped; {H1,H10} = 0.5 stays.
    REQUIRE(strict.size() == 2);
    CHECK(strict[1].ids == seqs[2]);
    CHECK(jaccard({"H1", "H3"}, {"H3", "H1"}) == 1.0);
    CHECK(jaccard({"H1"}, {"H2"}) == 0.0);
}

TEST_CASE("single applicable template cannot reach the minimum length") {
    std::map<std::string, double> conf{{"H7", 0.9}};
    auto seqs = enumerate_sequences(test::resources().templates, test::resources().taxonomy, conf,
                                    {analysis::ErrorCategory::segmentation}, test::resources().config);
    CHECK(seqs.empty());
}

TEST_CASE("selection: higher confidence wins") {
    PlannerConfig cfg;
    auto high = trace_of({step("H1", 0.9, {"target.bases"}), step("H10", 0.9, {"target.bases"})});
    auto low = trace_of({step("H1", 0.5, {"target.bases"}), step("H10", 0.5, {"target.bases"})});
    // validity 0.9, coherence 1, clarity 1 -> 0.45 + 0.3 + 0.2
    CHECK(score_trace(high, cfg).total == doctest::Approx(0.95));
    CHECK(score_trace(low, cfg).total == doctest::Approx(0.75));
    auto sel = select_trace({low, high}, cfg, test::offline());
    CHECK(sel.index == 1);
    CHECK(sel.trace == high);
}

TEST_CASE("selection: scores by hand") {
    PlannerConfig cfg;
    auto t = trace_of({step("H1", 0.9, {"a"}), step("H3", 0.6, {"a", "b"}), step("H8", 0.6, {"c"})});
    auto s = score_trace(t, cfg);
    CHECK(s.validity == doctest::Approx(0.7));
    CHECK(s.coherence == doctest::Approx(0.5));
    CHECK(s.clarity == doctest::Approx(2.0 / 3.0));
    CHECK(s.total == doctest::Approx(0.35 + 0.15 + 0.2 * 2.0 / 3.0));
}

TEST_CASE("selection: singleton and ties") {
    PlannerConfig cfg;
    cfg.validity_weight = 1.0;
    cfg.coherence_weight = 0.0;
    cfg.clarity_weight = 0.0;
    auto only = trace_of({step("H1", 0.4, {}), step("H8", 0.4, {})});
    CHECK(select_trace({only}, cfg, test::offline()).trace == only);

    auto longer = trace_of({step("H1", 0.5, {}), step("H3", 0.5, {}), step("H8", 0.5, {})});
    auto shorter = trace_of({step("H1", 0.5, {}), step("H8", 0.5, {})});
    CHECK(select_trace({longer, shorter}, cfg, test::offline()).index == 1);

    auto b = trace_of({step("H1", 0.5, {}), step("H10", 0.5, {})});
    auto a = trace_of({step("H1", 0.5, {}), step("H9", 0.5, {})});
    CHECK(select_trace({b, a}, cfg, test::offline()).index == 1);
    CHECK_THROWS_AS(select_trace({}, cfg, test::offline()), NoLegalTrace);
}

TEST_CASE("id ordering is numeric") {
    CHECK(id_sequence_less({"H1", "H3"}, {"H1", "H10"}));
    CHECK_FALSE(id_sequence_less({"H1", "H10"}, {"H1", "H3"}));
    CHECK(id_sequence_less({"H1"}, {"H1", "H2"}));
}

TEST_CASE("planner config") {
    PlannerConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(planner_config_from_json(to_json(c)) == c);
    CHECK_THROWS_AS(planner_config_from_json({{"max_steps", 7}}).validate(), ConfigError);
    CHECK_THROWS_AS(planner_config_from_json({{"colour", 1}}), ConfigError);
    CHECK_THROWS_AS(planner_config_from_json({{"epsilon", "wide"}}), ConfigError);
    CHECK_THROWS_AS(planner_config_from_json({{"validity_weight", 0.9}}).validate(), ConfigError);
}

TEST_CASE("trace json round trip") {
    auto t = test::analyze_pair("reeching", "reaching").selection.trace;
    nlohmann::json j = t;
    CHECK(j.get<InquiryTrace>() == t);
}

}
