#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace swi::linguistics {

// Phoneme strings are compared without their slash delimiters; length marks
// and all other symbols are significant ("/iː/" == "iː" != "i").
std::string normalize_phoneme(const std::string &phoneme);
bool is_silent(const std::string &phoneme);

struct Spelling {
    std::string grapheme;
    std::string example;
};

// Attested English spellings for each phoneme, each with an example word.
class GraphemePhonemeCorpus {
public:
    GraphemePhonemeCorpus() = default;
    static GraphemePhonemeCorpus load(const std::filesystem::path &file);
    static GraphemePhonemeCorpus from_json_text(const std::string &text);

    void add(const std::string &phoneme, Spelling spelling);

    bool attests(const std::string &phoneme, const std::string &grapheme) const;
    // First phoneme (in file order) listing the grapheme among its spellings.
    std::optional<std::string> phoneme_for(const std::string &grapheme) const;
    // True when some phoneme (silent included) lists the grapheme.
    bool knows(const std::string &grapheme) const;
    const std::vector<Spelling> &spellings(const std::string &phoneme) const;
    // Example words for the phoneme spelled with `grapheme`.
    std::vector<std::string> examples(const std::string &phoneme, const std::string &grapheme) const;
    bool is_example_word(const std::string &word) const;

    const std::vector<std::string> &phonemes() const { return order; }
    std::string version;

private:
    std::vector<std::string> order;
    std::map<std::string, std::vector<Spelling>> entries;
};

struct AlignedPair {
    std::string grapheme; // "∅" when the phoneme has no letters
    std::string phoneme;  // "∅" when the grapheme is silent or unmatched

    bool operator==(const AlignedPair &) const = default;
};

struct Alignment {
    std::vector<AlignedPair> pairs;
    std::size_t cost = 0;
};

// Minimal-cost monotone alignment of a grapheme sequence to a phoneme
// sequence. A pair costs nothing when the corpus attests the spelling or the
// phoneme is silent; unattested pairs and gaps cost one each.
Alignment align(const std::vector<std::string> &graphemes, const std::vector<std::string> &phonemes,
                const GraphemePhonemeCorpus &corpus);

} // namespace swi::linguistics
