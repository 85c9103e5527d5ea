#include "filter.h"

#include "../common/errors.h"

using namespace std;
using nlohmann::json;

namespace swi::planner {

namespace {

json scalar(const hypotheses::Value &v) {
    if (auto b = get_if<bool>(&v))
        return *b;
    if (auto d = get_if<double>(&v))
        return *d;
    return get<string>(v);
}

void add_record(FactBase &facts, const string &scope, const linguistics::WordProperties &p) {
    const json record = p;
    for (const auto &[key, value] : record.items())
        facts.push_back({scope + "." + key, value});
    if (!record.contains("etymology"))
        facts.push_back({scope + ".etymology", nullptr});
}

} // namespace

FactBase build_facts(const analysis::DiagnosticFeatures &features, const WordPair &words) {
    FactBase facts;
    for (const auto &field : hypotheses::guard_fields())
        facts.push_back({field.name, scalar(hypotheses::field_value(field.name, features, words.target))});
    facts.push_back({"error_present", linguistics::lowercase(words.attempt.word) != linguistics::lowercase(words.target.word)});
    add_record(facts, "target", words.target);
    add_record(facts, "attempt", words.attempt);
    const json f = features;
    for (const auto &[key, value] : f.items())
        facts.push_back({"features." + key, value});
    facts.push_back({"features.phoneme_distance", features.phoneme_distance()});
    return facts;
}

Rule template_rule(const hypotheses::HypothesisTemplate &t) {
    Rule rule = compile_guard(t.guard);
    for (Clause &c : rule.clauses) {
        c.patterns.insert(c.patterns.begin(), {"error_present", Term::ground(true)});
        for (const string &ref : t.evidence)
            c.patterns.push_back({ref, Term::var("?" + ref)});
    }
    return rule;
}

vector<FilteredHypothesis> filter_hypotheses(const hypotheses::TemplateLibrary &templates,
                                             const analysis::ErrorDiagnosis &diagnosis, const WordPair &words,
                                             const detection::AttemptContext &context,
                                             const providers::ProviderHandle &provider, const PlannerConfig &config) {
    if (templates.size() != 18)
        throw SchemaError("hypothesis filter needs the 18 templates");
    const FactBase facts = build_facts(diagnosis.features, words);
    const hypotheses::GuardParams params{{"epsilon", config.epsilon}};
    vector<FilteredHypothesis> out;
    for (const auto &t : templates) {
        auto bindings = unify(template_rule(t), facts, params);
        if (!bindings)
            continue;
        FilteredHypothesis h;
        h.tmpl = &t;
        for (const string &ref : t.evidence)
            h.evidence[ref] = bindings->at("?" + ref);
        h.descriptor_score = hypotheses::score_descriptor(t, context, diagnosis, provider);
        h.confidence = config.descriptor_weight * h.descriptor_score + (1.0 - config.descriptor_weight);
        out.push_back(std::move(h));
    }
    return out;
}

} // namespace swi::planner
