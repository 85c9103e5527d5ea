#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace swi::analysis {

enum class SuffixChange { doubling, e_drop, y_to_i };

std::string to_string(SuffixChange c);

struct SuffixRule {
    SuffixChange kind;
    std::string description;
    bool suffix_starts_with_vowel = false;
    std::string never_double;
    int max_vowel_groups = 1;
    std::string keep_before;
};

// Orthographic changes at a base/suffix junction, loaded from data.
class SuffixingRules {
public:
    static SuffixingRules load(const std::filesystem::path &file);
    static SuffixingRules from_json_text(const std::string &text);

    // The change needed to attach `suffix` (connector optional) to `base`,
    // if any. Rules are tried in file order.
    std::optional<SuffixChange> required_change(const std::string &base, const std::string &suffix) const;
    // base + suffix with the required change applied.
    std::string attach(const std::string &base, const std::string &suffix) const;

    const std::vector<SuffixRule> &rules() const { return list; }

private:
    bool is_vowel(char c) const;
    bool matches(const SuffixRule &rule, const std::string &base, const std::string &suffix) const;

    std::string vowels = "aeiou";
    std::vector<SuffixRule> list;
};

} // namespace swi::analysis
