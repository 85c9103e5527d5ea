#pragma once

#include "features.h"
#include "taxonomy.h"

#include "../detection/detector.h"
#include "../providers/provider.h"

#include <json.hpp>

#include <vector>

namespace swi::analysis {

struct RankedCategory {
    ErrorCategory category;
    double confidence;
    // The category is evidenced by the features (not just a fallback guess);
    // the planner must resolve every implicated category.
    bool implicated = false;

    bool operator==(const RankedCategory &) const = default;
};

struct ErrorDiagnosis {
    DiagnosticFeatures features;
    std::vector<RankedCategory> ranked_categories;

    // Confidence of the category, 0.0 when not ranked.
    double confidence(ErrorCategory c) const;
    std::vector<ErrorCategory> implicated() const;
    bool operator==(const ErrorDiagnosis &) const = default;
};

// Fixed offline ranking: categories whose rule fires come first in priority
// order, then fallbacks fill the list to at least three entries. Total over
// every feature combination.
std::vector<RankedCategory> decision_table(const DiagnosticFeatures &f, bool semantic_appropriateness,
                                           double epsilon = 0.15);

inline constexpr double ladder[] = {0.9, 0.5, 0.3, 0.2, 0.1, 0.05, 0.02};

// Offline handler for the error_ranking task.
nlohmann::json offline_error_ranking(const nlohmann::json &payload);

ErrorDiagnosis diagnose(const linguistics::WordProperties &attempt, const linguistics::WordProperties &target,
                        const detection::AttemptContext &context, const providers::ProviderHandle &provider,
                        const SuffixingRules &rules, double epsilon = 0.15);

void to_json(nlohmann::json &j, const RankedCategory &r);
void to_json(nlohmann::json &j, const ErrorDiagnosis &d);

} // namespace swi::analysis
