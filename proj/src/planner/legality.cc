#include "legality.h"

#include <algorithm>
#include <map>

using namespace std;
using namespace swi::hypotheses;

namespace swi::planner {

vector<string> check_trace(const InquiryTrace &trace, const LegalityContext &ctx) {
    vector<string> v;
    const int n = static_cast<int>(trace.steps.size());
    if (n < ctx.config.min_steps || n > ctx.config.max_steps)
        v.push_back("trace has " + to_string(n) + " steps, outside [" + to_string(ctx.config.min_steps) + ", " +
                    to_string(ctx.config.max_steps) + "]");

    vector<const HypothesisTemplate *> steps;
    set<string> seen;
    for (const auto &s : trace.steps) {
        const HypothesisTemplate *t = nullptr;
        for (const auto &c : ctx.templates)
            if (c.id == s.template_id)
                t = &c;
        if (!t) {
            v.push_back("unknown template " + s.template_id);
            return v;
        }
        if (!seen.insert(t->id).second)
            v.push_back("template " + t->id + " repeats");
        if (!ctx.available.count(t->id))
            v.push_back("template " + t->id + " was not filtered in");
        steps.push_back(t);
    }

    if (ctx.available.count("H1") && (steps.empty() || steps.front()->id != "H1"))
        v.push_back("meaning clarification (H1) must open the trace");

    set<LearningEffect> held;
    map<QuestionType, vector<const HypothesisTemplate *>> by_type;
    for (size_t i = 0; i < steps.size(); ++i) {
        const auto *t = steps[i];
        for (const auto &group : t->effect_preconditions) {
            bool ok = any_of(group.begin(), group.end(), [&](LearningEffect e) { return held.count(e) > 0; });
            if (!ok) {
                string names;
                for (auto e : group)
                    names += (names.empty() ? "" : "|") + hypotheses::to_string(e);
                v.push_back("step " + to_string(i + 1) + " (" + t->id + ") needs " + names);
            }
        }
        if (i > 0 && t->question_type < steps[i - 1]->question_type)
            v.push_back("step " + to_string(i + 1) + " (" + t->id + ") returns to " +
                        hypotheses::to_string(t->question_type) + " after " +
                        hypotheses::to_string(steps[i - 1]->question_type));
        for (const auto *earlier : by_type[t->question_type]) {
            bool builds_on = false;
            for (const auto &group : t->effect_preconditions)
                for (auto e : group)
                    builds_on = builds_on || e == earlier->effect;
            if (!builds_on)
                v.push_back("step " + to_string(i + 1) + " (" + t->id + ") repeats question type " +
                            hypotheses::to_string(t->question_type) + " without building on " + earlier->id);
        }
        by_type[t->question_type].push_back(t);
        held.insert(t->effect);
    }

    vector<string> expected;
    for (const auto *t : steps)
        expected.push_back(hypotheses::to_string(t->effect));
    if (trace.achieved_effects != expected)
        v.push_back("achieved_effects does not match the steps' effects");

    for (auto category : ctx.implicated) {
        bool resolved = any_of(held.begin(), held.end(), [&](LearningEffect e) {
            return ctx.taxonomy.resolves(category, hypotheses::to_string(e));
        });
        if (!resolved)
            v.push_back("closure: " + analysis::to_string(category) + " is not resolved");
    }
    return v;
}

} // namespace swi::planner
