#include "diagnosis.h"

#include "../common/errors.h"

#include <algorithm>

using namespace std;
using nlohmann::json;

namespace swi::analysis {

double ErrorDiagnosis::confidence(ErrorCategory c) const {
    for (const auto &r : ranked_categories)
        if (r.category == c)
            return r.confidence;
    return 0.0;
}

vector<ErrorCategory> ErrorDiagnosis::implicated() const {
    vector<ErrorCategory> out;
    for (const auto &r : ranked_categories)
        if (r.implicated)
            out.push_back(r.category);
    if (out.empty() && !ranked_categories.empty())
        out.push_back(ranked_categories.front().category);
    return out;
}

vector<RankedCategory> decision_table(const DiagnosticFeatures &f, bool semantic_appropriateness, double epsilon) {
    const bool structural = f.prefix_error || f.suffix_error || f.segmentation_error || f.suffixing_change_applies;
    vector<ErrorCategory> fired;
    if (f.segmentation_error)
        fired.push_back(ErrorCategory::segmentation);
    if (f.homophone_confusion)
        fired.push_back(ErrorCategory::homophone);
    if (f.suffixing_change_applies)
        fired.push_back(ErrorCategory::suffixing_convention);
    if (f.prefix_error || f.suffix_error || (!f.morpheme_boundaries_preserved && !f.segmentation_error) ||
        f.morphemes_affected >= 2)
        fired.push_back(ErrorCategory::morphological_confusion);
    if (f.phoneme_distance() <= epsilon && f.grapheme_mismatch_count >= 1 && !structural && !f.homophone_confusion)
        fired.push_back(ErrorCategory::gpc_mismatch);
    if (f.visual_similarity_only)
        fired.push_back(ErrorCategory::visual_confusion);
    if (!semantic_appropriateness)
        fired.push_back(ErrorCategory::semantic_mismatch);

    vector<RankedCategory> out;
    auto push = [&](ErrorCategory c, bool implicated) {
        for (const auto &r : out)
            if (r.category == c)
                return;
        out.push_back({c, ladder[min(out.size(), size(ladder) - 1)], implicated});
    };
    for (ErrorCategory c : fired)
        push(c, true);
    for (ErrorCategory c : {ErrorCategory::gpc_mismatch, ErrorCategory::morphological_confusion,
                            ErrorCategory::semantic_mismatch})
        if (out.size() < 3)
            push(c, false);
    return out;
}

json offline_error_ranking(const json &payload) {
    DiagnosticFeatures f = payload.at("features").get<DiagnosticFeatures>();
    const bool semantic = payload.value("semantic_appropriateness", true);
    const double epsilon = payload.value("epsilon", 0.15);
    json ranking = json::array();
    for (const auto &r : decision_table(f, semantic, epsilon))
        ranking.push_back(r);
    return {{"ranking", ranking}};
}

ErrorDiagnosis diagnose(const linguistics::WordProperties &attempt, const linguistics::WordProperties &target,
                        const detection::AttemptContext &context, const providers::ProviderHandle &provider,
                        const SuffixingRules &rules, double epsilon) {
    linguistics::validate(attempt);
    linguistics::validate(target);
    ErrorDiagnosis d;
    d.features = compute_features(attempt, target, rules, epsilon);
    json payload{{"attempt", attempt.word},
                 {"target", target.word},
                 {"sentence", context.sentence},
                 {"features", d.features},
                 {"semantic_appropriateness", target.semantic_appropriateness},
                 {"epsilon", epsilon}};
    auto response = provider.complete({providers::Task::error_ranking, payload});
    for (const auto &r : response.payload.at("ranking")) {
        RankedCategory rc;
        try {
            rc.category = category_from_string(r.at("category").get<string>());
        } catch (const SchemaError &e) {
            throw SchemaViolation(e.what());
        }
        rc.confidence = r.at("confidence").get<double>();
        rc.implicated = r.value("implicated", false);
        for (const auto &seen : d.ranked_categories)
            if (seen.category == rc.category)
                throw SchemaViolation("category ranked twice: " + to_string(rc.category));
        if (!d.ranked_categories.empty() && rc.confidence > d.ranked_categories.back().confidence)
            throw SchemaViolation("ranking confidences must be non-increasing");
        d.ranked_categories.push_back(rc);
    }
    return d;
}

void to_json(json &j, const RankedCategory &r) {
    j = json{{"category", to_string(r.category)}, {"confidence", r.confidence}, {"implicated", r.implicated}};
}

void to_json(json &j, const ErrorDiagnosis &d) {
    j = json{{"features", d.features}, {"ranked_categories", d.ranked_categories}};
}

} // namespace swi::analysis
