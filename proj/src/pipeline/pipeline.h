#pragma once

#include "resources.h"

#include "../analysis/diagnosis.h"
#include "../detection/detector.h"
#include "../planner/filter.h"
#include "../planner/selector.h"
#include "../program/plan.h"

namespace swi::pipeline {

// Everything computed for one misspelling, from properties to the chosen
// inquiry trace.
struct Analysis {
    detection::AttemptContext context;
    linguistics::WordProperties target;
    linguistics::WordProperties attempt;
    analysis::ErrorDiagnosis diagnosis;
    std::vector<planner::FilteredHypothesis> filtered;
    std::vector<planner::InquiryTrace> candidates;
    planner::Selection selection;
    program::ExecutionPlan plan;
    int synthesis_retries = 0;
};

Analysis analyze(const detection::AttemptContext &context, const Resources &resources,
                 const providers::ProviderHandle &provider);

nlohmann::json to_json(const Analysis &a);

} // namespace swi::pipeline
