#pragma once

#include "plan.h"

#include "../analysis/features.h"
#include "../analysis/suffixing.h"
#include "../hypotheses/templates.h"
#include "../linguistics/gpc_corpus.h"
#include "../planner/trace.h"
#include "../providers/provider.h"

namespace swi::program {

// What the offline synthesizer draws on besides the request itself.
struct SynthesisKnowledge {
    const hypotheses::TemplateLibrary &templates;
    const linguistics::GraphemePhonemeCorpus &corpus;
    const analysis::SuffixingRules &rules;
};

// Deterministic plan for a trace: one prompt node per step (h1..hN), a
// reveal node after grapheme and look-alike steps, and a terminal node.
ExecutionPlan build_plan(const planner::InquiryTrace &trace, const linguistics::WordProperties &target,
                         const linguistics::WordProperties &attempt, const SynthesisKnowledge &knowledge);

// Offline handler for program_synthesis: payload {trace, target, attempt, features}.
nlohmann::json offline_program_synthesis(const nlohmann::json &payload, const SynthesisKnowledge &knowledge);

struct SynthesisResult {
    ExecutionPlan plan;
    int retry_count = 0; // failed attempts before the accepted one
};

// Asks the provider for a plan until one parses and validates, at most
// `max_retries` times. Throws SynthesisFailure carrying every attempt's
// violations.
SynthesisResult regenerate_on_failure(const planner::InquiryTrace &trace, const linguistics::WordProperties &target,
                                      const linguistics::WordProperties &attempt,
                                      const analysis::DiagnosticFeatures &features,
                                      const providers::ProviderHandle &provider, int max_retries = 3);

ExecutionPlan synthesize_program(const planner::InquiryTrace &trace, const linguistics::WordProperties &target,
                                 const linguistics::WordProperties &attempt,
                                 const analysis::DiagnosticFeatures &features,
                                 const providers::ProviderHandle &provider);

// Replaces {name} with values[name]. A "; "-separated clause that mentions a
// name whose value is empty is dropped. Unknown names are left in place.
std::string fill(const std::string &text, const std::map<std::string, std::string> &values);

} // namespace swi::program
