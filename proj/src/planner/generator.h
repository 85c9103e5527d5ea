#pragma once

#include "filter.h"
#include "legality.h"
#include "trace.h"

namespace swi::planner {

struct ScoredSequence {
    std::vector<std::string> ids;
    double total_confidence = 0.0;
};

// Every sequence of available templates that satisfies the composition
// rules and closes the implicated categories, found by depth-bounded search.
std::vector<std::vector<std::string>> enumerate_sequences(const hypotheses::TemplateLibrary &templates,
                                                          const analysis::ErrorTaxonomy &taxonomy,
                                                          const std::map<std::string, double> &confidence,
                                                          const std::vector<analysis::ErrorCategory> &implicated,
                                                          const PlannerConfig &config);

// Ranks by summed confidence (ties: smaller id sequence) and keeps a
// sequence only if its id set has Jaccard similarity <= max_jaccard with
// every sequence already kept. Returns at most `k`.
std::vector<ScoredSequence> top_k_diverse(const std::vector<std::vector<std::string>> &sequences,
                                          const std::map<std::string, double> &confidence, int k,
                                          double max_jaccard);

double jaccard(const std::vector<std::string> &a, const std::vector<std::string> &b);

std::string describe_trace(const std::vector<std::string> &ids, const hypotheses::TemplateLibrary &templates,
                           const analysis::ErrorTaxonomy &taxonomy,
                           const std::vector<analysis::ErrorCategory> &implicated);

// Offline handler for trace_generation: answers instance i with the i-th
// trace of the diverse top-k (or none).
nlohmann::json offline_trace_generation(const nlohmann::json &payload, const hypotheses::TemplateLibrary &templates,
                                        const analysis::ErrorTaxonomy &taxonomy);

// Issues `candidate_traces` generation requests concurrently, instantiates
// each returned sequence from the filtered hypotheses and keeps those the
// legality check accepts. Throws NoLegalTrace when none survive.
std::vector<InquiryTrace> generate_traces(const std::vector<FilteredHypothesis> &filtered,
                                          const analysis::ErrorDiagnosis &diagnosis,
                                          const hypotheses::TemplateLibrary &templates,
                                          const analysis::ErrorTaxonomy &taxonomy, const PlannerConfig &config,
                                          const providers::ProviderHandle &provider);

} // namespace swi::planner
