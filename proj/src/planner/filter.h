#pragma once

#include "config.h"
#include "unify.h"

#include "../analysis/diagnosis.h"
#include "../hypotheses/templates.h"

namespace swi::planner {

// The attempt and target records an inquiry reasons about.
struct WordPair {
    linguistics::WordProperties attempt;
    linguistics::WordProperties target;
};

struct FilteredHypothesis {
    const hypotheses::HypothesisTemplate *tmpl = nullptr;
    double descriptor_score = 0.0;
    // Blend of descriptor score and certainty: w * score + (1 - w).
    double confidence = 0.0;
    nlohmann::json evidence = nlohmann::json::object();
};

// Tuples for every guard field, the error gate ("error_present") and every
// evidence reference ("target.bases", "features.phoneme_match", ...).
FactBase build_facts(const analysis::DiagnosticFeatures &features, const WordPair &words);

// Guard conjoined with the error gate and the template's evidence patterns.
Rule template_rule(const hypotheses::HypothesisTemplate &t);

// Templates whose rule unifies against the facts, in id order, each scored
// through the provider.
std::vector<FilteredHypothesis> filter_hypotheses(const hypotheses::TemplateLibrary &templates,
                                                  const analysis::ErrorDiagnosis &diagnosis, const WordPair &words,
                                                  const detection::AttemptContext &context,
                                                  const providers::ProviderHandle &provider,
                                                  const PlannerConfig &config = {});

} // namespace swi::planner
