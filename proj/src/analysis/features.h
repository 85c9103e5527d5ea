#pragma once

#include "suffixing.h"

#include "../linguistics/gpc_corpus.h"
#include "../linguistics/word_properties.h"

#include <json.hpp>

namespace swi::analysis {

struct DiagnosticFeatures {
    bool prefix_error = false;
    bool suffix_error = false;
    bool segmentation_error = false;
    bool suffixing_change_applies = false;
    double phoneme_match = 1.0;
    std::size_t grapheme_mismatch_count = 0;
    bool morpheme_boundaries_preserved = true;
    bool homophone_confusion = false;
    bool visual_similarity_only = false;
    // Number of target morphemes touched by at least one edit.
    std::size_t morphemes_affected = 0;

    double phoneme_distance() const { return 1.0 - phoneme_match; }
    bool operator==(const DiagnosticFeatures &) const = default;
};

// Features are computed from the two records alone; `epsilon` is the
// phoneme-distance tolerance below which an attempt counts as sounding right.
DiagnosticFeatures compute_features(const linguistics::WordProperties &attempt,
                                    const linguistics::WordProperties &target, const SuffixingRules &rules,
                                    double epsilon = 0.15);

void to_json(nlohmann::json &j, const DiagnosticFeatures &f);
void from_json(const nlohmann::json &j, DiagnosticFeatures &f);

} // namespace swi::analysis
