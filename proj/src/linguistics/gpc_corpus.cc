#include "gpc_corpus.h"

#include "../common/errors.h"
#include "word_properties.h"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

using namespace std;

namespace swi::linguistics {

string normalize_phoneme(const string &phoneme) {
    string out;
    for (char c : phoneme)
        if (c != '/')
            out += c;
    return out;
}

bool is_silent(const string &phoneme) {
    return normalize_phoneme(phoneme) == SILENT;
}

GraphemePhonemeCorpus GraphemePhonemeCorpus::load(const filesystem::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot open grapheme-phoneme corpus: " + file.string());
    stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

GraphemePhonemeCorpus GraphemePhonemeCorpus::from_json_text(const string &text) {
    GraphemePhonemeCorpus corpus;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw SchemaError(string("grapheme-phoneme corpus: ") + e.what());
    }
    corpus.version = doc.value("version", "");
    for (const auto &entry : doc.at("phonemes")) {
        string phoneme = entry.at("phoneme").get<string>();
        for (const auto &s : entry.at("spellings"))
            corpus.add(phoneme, {s.at("grapheme").get<string>(), s.at("example").get<string>()});
    }
    return corpus;
}

void GraphemePhonemeCorpus::add(const string &phoneme, Spelling spelling) {
    if (spelling.grapheme.empty())
        throw SchemaError("empty grapheme for phoneme " + phoneme);
    if (spelling.example.find(spelling.grapheme) == string::npos)
        throw SchemaError("example '" + spelling.example + "' does not contain grapheme '" +
                          spelling.grapheme + "'");
    string key = normalize_phoneme(phoneme);
    if (!entries.count(key))
        order.push_back(key);
    entries[key].push_back(std::move(spelling));
}

bool GraphemePhonemeCorpus::attests(const string &phoneme, const string &grapheme) const {
    auto it = entries.find(normalize_phoneme(phoneme));
    if (it == entries.end())
        return false;
    return any_of(it->second.begin(), it->second.end(),
                  [&](const Spelling &s) { return s.grapheme == grapheme; });
}

bool GraphemePhonemeCorpus::knows(const string &grapheme) const {
    for (const string &p : order)
        if (attests(p, grapheme))
            return true;
    return false;
}

optional<string> GraphemePhonemeCorpus::phoneme_for(const string &grapheme) const {
    for (const string &p : order) {
        if (p == SILENT)
            continue;
        if (attests(p, grapheme))
            return "/" + p + "/";
    }
    return nullopt;
}

const vector<Spelling> &GraphemePhonemeCorpus::spellings(const string &phoneme) const {
    static const vector<Spelling> none;
    auto it = entries.find(normalize_phoneme(phoneme));
    return it == entries.end() ? none : it->second;
}

vector<string> GraphemePhonemeCorpus::examples(const string &phoneme, const string &grapheme) const {
    vector<string> out;
    for (const Spelling &s : spellings(phoneme))
        if (s.grapheme == grapheme)
            out.push_back(s.example);
    return out;
}

bool GraphemePhonemeCorpus::is_example_word(const string &word) const {
    for (const auto &[p, list] : entries)
        for (const Spelling &s : list)
            if (s.example == word)
                return true;
    return false;
}

Alignment align(const vector<string> &graphemes, const vector<string> &phonemes,
                const GraphemePhonemeCorpus &corpus) {
    const size_t n = graphemes.size();
    const size_t m = phonemes.size();
    auto pair_cost = [&](size_t i, size_t j) -> size_t {
        const string &g = graphemes[i];
        const string &p = phonemes[j];
        if (is_silent(p) || corpus.attests(p, g))
            return 0;
        return 1;
    };
    // best[i][j]: cheapest alignment of graphemes[i:] with phonemes[j:]
    vector<vector<size_t>> best(n + 1, vector<size_t>(m + 1, 0));
    for (size_t i = n + 1; i-- > 0;) {
        for (size_t j = m + 1; j-- > 0;) {
            if (i == n && j == m)
                continue;
            size_t c = numeric_limits<size_t>::max() / 4;
            if (i < n && j < m)
                c = min(c, pair_cost(i, j) + best[i + 1][j + 1]);
            if (i < n)
                c = min(c, 1 + best[i + 1][j]);
            if (j < m)
                c = min(c, 1 + best[i][j + 1]);
            best[i][j] = c;
        }
    }
    Alignment result;
    result.cost = best[0][0];
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && pair_cost(i, j) + best[i + 1][j + 1] == best[i][j]) {
            result.pairs.push_back({graphemes[i], phonemes[j]});
            ++i;
            ++j;
        } else if (i < n && 1 + best[i + 1][j] == best[i][j]) {
            result.pairs.push_back({graphemes[i], SILENT});
            ++i;
        } else {
            result.pairs.push_back({SILENT, phonemes[j]});
            ++j;
        }
    }
    return result;
}

} // namespace swi::linguistics
