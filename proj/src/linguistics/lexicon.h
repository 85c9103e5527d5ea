#pragma once

#include "word_properties.h"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace swi::linguistics {

// Bundled word knowledge: full property records for lexicon entries plus a
// plain list of other known spellings (function words and everyday words
// that the spell checker should accept but that carry no record).
class Lexicon {
public:
    Lexicon() = default;
    // One JSON object per line; blank lines and lines starting with '#' skipped.
    static Lexicon load(const std::filesystem::path &records,
                        const std::filesystem::path &wordlist = {});
    static Lexicon from_jsonl(const std::string &text);

    void add(WordProperties props);
    void add_known_word(const std::string &word);

    const WordProperties *find(const std::string &word) const;
    bool has_entry(const std::string &word) const { return find(word) != nullptr; }
    // True for entries and plain known words alike.
    bool is_known(const std::string &word) const;

    std::vector<std::string> entry_words() const;
    const std::map<std::string, WordProperties> &entries() const { return records; }

private:
    std::map<std::string, WordProperties> records;
    std::set<std::string> known;
};

std::string to_jsonl_line(const WordProperties &props);

} // namespace swi::linguistics
