#pragma once

#include "edit_script.h"
#include "gpc_corpus.h"
#include "word_properties.h"

#include <string>

namespace swi::linguistics {

// Character-level alignment of an attempt against its target word, with each
// attempt character anchored to the target character it stands for. Extra
// attempt characters anchor to the preceding target character.
struct AttemptProjection {
    EditScript chars;                       // attempt -> target
    std::vector<std::size_t> anchor;        // per attempt char: target char index
    std::vector<bool> extra;                // per attempt char: no target counterpart
};

AttemptProjection project(const std::string &attempt, const std::string &target);

// Properties of a misspelled form, derived from the target's record: target
// grapheme and morpheme boundaries are carried over through the character
// alignment, and each attempt grapheme is voiced as the target phoneme when
// the corpus attests that spelling (otherwise as its most common sound).
WordProperties derive_attempt_properties(const std::string &attempt, const WordProperties &target,
                                         const GraphemePhonemeCorpus &corpus);

// Edit cost of the minimal alignment between the two grapheme sequences.
std::size_t grapheme_mismatch_count(const WordProperties &attempt, const WordProperties &target);

// 1 - normalized edit distance between the sounded (non-silent) phonemes.
double phoneme_match(const WordProperties &attempt, const WordProperties &target);

std::vector<std::string> sounded_phonemes(const WordProperties &props);

} // namespace swi::linguistics
