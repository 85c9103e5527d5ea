#pragma once

#include "config.h"
#include "trace.h"

#include "../analysis/taxonomy.h"
#include "../hypotheses/templates.h"

#include <set>
#include <string>
#include <vector>

namespace swi::planner {

struct LegalityContext {
    const hypotheses::TemplateLibrary &templates;
    const analysis::ErrorTaxonomy &taxonomy;
    std::vector<analysis::ErrorCategory> implicated;
    std::set<std::string> available; // ids that passed the filter
    PlannerConfig config;
};

// Independent check of a trace against the composition rules:
//   - step count within [min_steps, max_steps], no repeated template
//   - every step was filtered in
//   - each step's effect preconditions hold from earlier effects
//   - the meaning clarification step (H1) opens the trace whenever it was
//     filtered in
//   - question types never move backwards (meaning, structure, gpc,
//     relatives), and a type appears at most once unless the later step
//     builds on an effect of an earlier step of the same type
//   - achieved_effects equals the steps' effects in order
//   - every implicated error category is resolved by an achieved effect
// Returns human-readable violations; empty means legal.
std::vector<std::string> check_trace(const InquiryTrace &trace, const LegalityContext &ctx);

} // namespace swi::planner
