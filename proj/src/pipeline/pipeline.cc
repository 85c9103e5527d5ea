#include "pipeline.h"

#include "../linguistics/analysis.h"
#include "../linguistics/synthesis.h"
#include "../planner/generator.h"
#include "../program/synthesis.h"

#include <cctype>

using namespace std;
using nlohmann::json;

namespace swi::pipeline {

namespace {

// The context sentence with the misspelling replaced by its target.
string corrected_sentence(const detection::AttemptContext &c) {
    string s = c.sentence;
    if (c.attempt.empty())
        return s;
    size_t from = 0;
    while ((from = s.find(c.attempt, from)) != string::npos) {
        const size_t end = from + c.attempt.size();
        const bool left = from == 0 || !isalpha(static_cast<unsigned char>(s[from - 1]));
        const bool right = end == s.size() || !isalpha(static_cast<unsigned char>(s[end]));
        if (left && right)
            return s.replace(from, c.attempt.size(), c.target);
        from = end;
    }
    return s;
}

} // namespace

Analysis analyze(const detection::AttemptContext &context, const Resources &resources,
                 const providers::ProviderHandle &provider) {
    Analysis a;
    a.context = context;
    a.target = linguistics::synthesize_properties(context.target, corrected_sentence(context), provider);
    a.attempt = linguistics::derive_attempt_properties(context.attempt, a.target, resources.corpus);
    a.diagnosis = analysis::diagnose(a.attempt, a.target, context, provider, resources.rules, resources.config.epsilon);
    a.filtered = planner::filter_hypotheses(resources.templates, a.diagnosis, {a.attempt, a.target}, context, provider,
                                            resources.config);
    a.candidates = planner::generate_traces(a.filtered, a.diagnosis, resources.templates, resources.taxonomy,
                                            resources.config, provider);
    a.selection = planner::select_trace(a.candidates, resources.config, provider);
    auto synthesized = program::regenerate_on_failure(a.selection.trace, a.target, a.attempt, a.diagnosis.features,
                                                      provider);
    a.plan = std::move(synthesized.plan);
    a.synthesis_retries = synthesized.retry_count;
    return a;
}

json to_json(const Analysis &a) {
    json filtered = json::array();
    for (const auto &h : a.filtered)
        filtered.push_back({{"id", h.tmpl->id},
                            {"descriptor_score", h.descriptor_score},
                            {"confidence", h.confidence},
                            {"evidence", h.evidence}});
    return {{"context", a.context},
            {"target", a.target},
            {"attempt", a.attempt},
            {"diagnosis", a.diagnosis},
            {"filtered", filtered},
            {"candidates", a.candidates},
            {"selected", {{"index", a.selection.index},
                          {"trace", a.selection.trace},
                          {"score", a.selection.score}}},
            {"plan", program::plan_to_json(a.plan)},
            {"synthesis_retries", a.synthesis_retries}};
}

} // namespace swi::pipeline
