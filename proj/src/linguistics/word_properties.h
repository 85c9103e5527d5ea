#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace swi::linguistics {

// Marker phoneme for a grapheme that carries no sound (silent letters and
// the word-separator unit of multi-word entries).
inline constexpr const char *SILENT = "∅";

enum class Tristate { yes, no, unknown };

struct EtymologyNote {
    std::string origin_language;
    std::string root;
    std::string gloss;

    bool operator==(const EtymologyNote &) const = default;
};

struct WordProperties {
    std::string word;
    std::vector<std::string> morphemes;
    std::vector<std::string> bases;
    std::vector<std::string> prefixes;
    std::vector<std::string> suffixes;
    std::vector<std::string> graphemes;
    std::vector<std::string> phonemes;
    std::vector<std::string> related_words;
    std::optional<EtymologyNote> etymology;
    std::vector<std::string> homophones;
    // Relatives whose pronunciation of the shared base shifts (sign/signal).
    std::vector<std::string> sound_shift_relatives;
    bool semantic_appropriateness = true;
    bool syntactic_correctness = true;
    Tristate meaning_understood = Tristate::unknown;
    std::string context_sentence;

    bool operator==(const WordProperties &) const = default;
};

std::string to_string(Tristate t);
Tristate tristate_from_string(const std::string &s);

// Returns a list of human-readable invariant violations; empty means valid.
std::vector<std::string> check_invariants(const WordProperties &props);

// Throws InvariantViolation listing every failure.
void validate(const WordProperties &props);

// Morpheme with connector hyphens removed ("-ing" -> "ing", "con-" -> "con").
std::string strip_connector(const std::string &morpheme);

// Character span [start, end) of each morpheme inside props.word, skipping the
// spaces that separate the words of a multi-word entry.
std::vector<std::pair<std::size_t, std::size_t>>
morpheme_spans(const WordProperties &props);

// Character span of each grapheme inside props.word.
std::vector<std::pair<std::size_t, std::size_t>>
grapheme_spans(const WordProperties &props);

// Related words that contain one of the bases as a substring.
std::size_t relatives_sharing_base(const WordProperties &props);

// Related words that share no base spelling (historical cousins).
std::size_t cousin_count(const WordProperties &props);

std::string lowercase(std::string s);

void to_json(nlohmann::json &j, const EtymologyNote &e);
void from_json(const nlohmann::json &j, EtymologyNote &e);
void to_json(nlohmann::json &j, const WordProperties &p);
void from_json(const nlohmann::json &j, WordProperties &p);

} // namespace swi::linguistics
