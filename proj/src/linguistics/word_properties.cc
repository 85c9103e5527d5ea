#include "word_properties.h"

#include "../common/errors.h"

#include <algorithm>
#include <cctype>

using namespace std;

namespace swi::linguistics {

string to_string(Tristate t) {
    switch (t) {
    case Tristate::yes:
        return "yes";
    case Tristate::no:
        return "no";
    case Tristate::unknown:
        return "unknown";
    }
    return "unknown";
}

Tristate tristate_from_string(const string &s) {
    if (s == "yes")
        return Tristate::yes;
    if (s == "no")
        return Tristate::no;
    if (s == "unknown")
        return Tristate::unknown;
    throw SchemaError("meaning_understood must be yes/no/unknown, got '" + s + "'");
}

string lowercase(string s) {
    for (char &c : s)
        c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
    return s;
}

string strip_connector(const string &morpheme) {
    string out;
    for (char c : morpheme)
        if (c != '-')
            out += c;
    return out;
}

static string without_spaces(const string &s) {
    string out;
    for (char c : s)
        if (c != ' ')
            out += c;
    return out;
}

vector<pair<size_t, size_t>> morpheme_spans(const WordProperties &props) {
    vector<pair<size_t, size_t>> spans;
    const string word = lowercase(props.word);
    size_t pos = 0;
    for (const string &m : props.morphemes) {
        while (pos < word.size() && word[pos] == ' ')
            ++pos;
        size_t len = strip_connector(m).size();
        spans.emplace_back(pos, min(pos + len, word.size()));
        pos += len;
    }
    return spans;
}

vector<pair<size_t, size_t>> grapheme_spans(const WordProperties &props) {
    vector<pair<size_t, size_t>> spans;
    size_t pos = 0;
    for (const string &g : props.graphemes) {
        spans.emplace_back(pos, pos + g.size());
        pos += g.size();
    }
    return spans;
}

size_t relatives_sharing_base(const WordProperties &props) {
    size_t n = 0;
    for (const string &r : props.related_words) {
        const string lr = lowercase(r);
        if (lr == lowercase(props.word))
            continue;
        for (const string &b : props.bases) {
            if (!b.empty() && lr.find(lowercase(b)) != string::npos) {
                ++n;
                break;
            }
        }
    }
    return n;
}

size_t cousin_count(const WordProperties &props) {
    size_t sharing = relatives_sharing_base(props);
    size_t others = 0;
    for (const string &r : props.related_words)
        if (lowercase(r) != lowercase(props.word))
            ++others;
    return others - sharing;
}

vector<string> check_invariants(const WordProperties &props) {
    vector<string> errors;
    const string word = lowercase(props.word);
    if (word.empty())
        errors.push_back("word is empty");

    string joined_morphemes;
    for (const string &m : props.morphemes)
        joined_morphemes += lowercase(strip_connector(m));
    if (joined_morphemes != without_spaces(word))
        errors.push_back("morphemes concatenate to '" + joined_morphemes +
                         "', expected '" + without_spaces(word) + "'");

    string joined_graphemes;
    for (const string &g : props.graphemes) {
        if (g.empty())
            errors.push_back("empty grapheme");
        joined_graphemes += lowercase(g);
    }
    if (joined_graphemes != word)
        errors.push_back("graphemes concatenate to '" + joined_graphemes +
                         "', expected '" + word + "'");

    if (props.graphemes.size() != props.phonemes.size())
        errors.push_back("graphemes (" + std::to_string(props.graphemes.size()) +
                         ") and phonemes (" + std::to_string(props.phonemes.size()) +
                         ") differ in length");

    for (const string &b : props.bases) {
        bool found = any_of(props.morphemes.begin(), props.morphemes.end(),
                            [&](const string &m) {
                                return lowercase(strip_connector(m)).find(lowercase(b)) !=
                                       string::npos;
                            });
        if (!found)
            errors.push_back("base '" + b + "' is not inside any morpheme");
    }

    if (props.etymology && props.etymology->root.empty())
        errors.push_back("etymology present with empty root");
    return errors;
}

void validate(const WordProperties &props) {
    auto errors = check_invariants(props);
    if (errors.empty())
        return;
    string msg = "word_properties for '" + props.word + "':";
    for (const string &e : errors)
        msg += " " + e + ";";
    throw InvariantViolation(msg);
}

void to_json(nlohmann::json &j, const EtymologyNote &e) {
    j = nlohmann::json{{"origin_language", e.origin_language}, {"root", e.root}, {"gloss", e.gloss}};
}

void from_json(const nlohmann::json &j, EtymologyNote &e) {
    e.origin_language = j.value("origin_language", "");
    e.root = j.at("root").get<string>();
    e.gloss = j.value("gloss", "");
}

void to_json(nlohmann::json &j, const WordProperties &p) {
    j = nlohmann::json{
        {"word", p.word},
        {"morphemes", p.morphemes},
        {"bases", p.bases},
        {"prefixes", p.prefixes},
        {"suffixes", p.suffixes},
        {"graphemes", p.graphemes},
        {"phonemes", p.phonemes},
        {"related_words", p.related_words},
        {"etymology", nullptr},
        {"homophones", p.homophones},
        {"sound_shift_relatives", p.sound_shift_relatives},
        {"semantic_appropriateness", p.semantic_appropriateness},
        {"syntactic_correctness", p.syntactic_correctness},
        {"meaning_understood", to_string(p.meaning_understood)},
        {"context_sentence", p.context_sentence},
    };
    if (p.etymology)
        j["etymology"] = *p.etymology;
}

static vector<string> string_list(const nlohmann::json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null())
        return {};
    if (!j.at(key).is_array())
        throw SchemaError(string("field '") + key + "' must be a list");
    vector<string> out;
    for (const auto &v : j.at(key)) {
        if (!v.is_string())
            throw SchemaError(string("field '") + key + "' must contain strings");
        out.push_back(v.get<string>());
    }
    return out;
}

void from_json(const nlohmann::json &j, WordProperties &p) {
    if (!j.is_object())
        throw SchemaError("word_properties must be an object");
    if (!j.contains("word") || !j.at("word").is_string())
        throw SchemaError("word_properties missing string field 'word'");
    p.word = j.at("word").get<string>();
    p.morphemes = string_list(j, "morphemes");
    p.bases = string_list(j, "bases");
    p.prefixes = string_list(j, "prefixes");
    p.suffixes = string_list(j, "suffixes");
    p.graphemes = string_list(j, "graphemes");
    p.phonemes = string_list(j, "phonemes");
    p.related_words = string_list(j, "related_words");
    p.homophones = string_list(j, "homophones");
    p.sound_shift_relatives = string_list(j, "sound_shift_relatives");
    p.etymology.reset();
    if (j.contains("etymology") && !j.at("etymology").is_null())
        p.etymology = j.at("etymology").get<EtymologyNote>();
    p.semantic_appropriateness = j.value("semantic_appropriateness", true);
    p.syntactic_correctness = j.value("syntactic_correctness", true);
    p.meaning_understood = tristate_from_string(j.value("meaning_understood", "unknown"));
    p.context_sentence = j.value("context_sentence", "");
}

} // namespace swi::linguistics
