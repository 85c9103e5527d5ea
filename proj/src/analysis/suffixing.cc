#include "suffixing.h"

#include "../common/errors.h"
#include "../linguistics/word_properties.h"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace std;

namespace swi::analysis {

string to_string(SuffixChange c) {
    switch (c) {
    case SuffixChange::doubling:
        return "doubling";
    case SuffixChange::e_drop:
        return "e_drop";
    case SuffixChange::y_to_i:
        return "y_to_i";
    }
    return "?";
}

SuffixingRules SuffixingRules::load(const filesystem::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot open suffixing rules: " + file.string());
    stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

SuffixingRules SuffixingRules::from_json_text(const string &text) {
    SuffixingRules out;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        out.vowels = doc.value("vowels", out.vowels);
        for (const auto &r : doc.at("rules")) {
            SuffixRule rule;
            const string kind = r.at("kind").get<string>();
            if (kind == "doubling")
                rule.kind = SuffixChange::doubling;
            else if (kind == "e_drop")
                rule.kind = SuffixChange::e_drop;
            else if (kind == "y_to_i")
                rule.kind = SuffixChange::y_to_i;
            else
                throw SchemaError("unknown suffixing rule kind '" + kind + "'");
            rule.description = r.value("description", "");
            rule.suffix_starts_with_vowel = r.value("suffix_starts_with_vowel", false);
            rule.never_double = r.value("never_double", "");
            rule.max_vowel_groups = r.value("max_vowel_groups", 1);
            rule.keep_before = r.value("keep_before", "");
            out.list.push_back(rule);
        }
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(string("suffixing rules: ") + e.what());
    }
    return out;
}

bool SuffixingRules::is_vowel(char c) const {
    return vowels.find(c) != string::npos;
}

bool SuffixingRules::matches(const SuffixRule &rule, const string &base, const string &suffix) const {
    if (base.size() < 2 || suffix.empty())
        return false;
    if (rule.suffix_starts_with_vowel && !is_vowel(suffix.front()))
        return false;
    const char last = base.back();
    const char prev = base[base.size() - 2];
    switch (rule.kind) {
    case SuffixChange::doubling: {
        if (base.size() < 3 || is_vowel(last) || rule.never_double.find(last) != string::npos)
            return false;
        if (!is_vowel(prev) || is_vowel(base[base.size() - 3]))
            return false;
        int groups = 0;
        for (size_t i = 0; i < base.size(); ++i)
            if (is_vowel(base[i]) && (i == 0 || !is_vowel(base[i - 1])))
                ++groups;
        return groups <= rule.max_vowel_groups;
    }
    case SuffixChange::e_drop:
        return last == 'e' && !is_vowel(prev);
    case SuffixChange::y_to_i:
        return last == 'y' && !is_vowel(prev) && rule.keep_before.find(suffix.front()) == string::npos;
    }
    return false;
}

optional<SuffixChange> SuffixingRules::required_change(const string &base, const string &suffix) const {
    const string b = linguistics::lowercase(base);
    const string s = linguistics::lowercase(linguistics::strip_connector(suffix));
    for (const SuffixRule &rule : list)
        if (matches(rule, b, s))
            return rule.kind;
    return nullopt;
}

string SuffixingRules::attach(const string &base, const string &suffix) const {
    string b = linguistics::lowercase(base);
    const string s = linguistics::lowercase(linguistics::strip_connector(suffix));
    auto change = required_change(b, s);
    if (!change)
        return b + s;
    switch (*change) {
    case SuffixChange::doubling:
        return b + b.back() + s;
    case SuffixChange::e_drop:
        b.pop_back();
        return b + s;
    case SuffixChange::y_to_i:
        b.back() = 'i';
        return b + s;
    }
    return b + s;
}

} // namespace swi::analysis
