#include "lexicon.h"

#include "../common/errors.h"

#include <fstream>
#include <sstream>

using namespace std;

namespace swi::linguistics {

Lexicon Lexicon::from_jsonl(const string &text) {
    Lexicon lex;
    istringstream in(text);
    string line;
    size_t line_no = 0;
    while (getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        try {
            lex.add(nlohmann::json::parse(line).get<WordProperties>());
        } catch (const nlohmann::json::exception &e) {
            throw SchemaError("lexicon line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error &e) {
            throw SchemaError("lexicon line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return lex;
}

Lexicon Lexicon::load(const filesystem::path &records, const filesystem::path &wordlist) {
    ifstream in(records);
    if (!in)
        throw ConfigError("cannot open lexicon: " + records.string());
    stringstream buffer;
    buffer << in.rdbuf();
    Lexicon lex = from_jsonl(buffer.str());
    if (!wordlist.empty()) {
        ifstream words(wordlist);
        if (!words)
            throw ConfigError("cannot open word list: " + wordlist.string());
        string w;
        while (words >> w)
            if (w[0] != '#')
                lex.add_known_word(w);
    }
    return lex;
}

void Lexicon::add(WordProperties props) {
    validate(props);
    string key = lowercase(props.word);
    known.insert(key);
    records[key] = std::move(props);
}

void Lexicon::add_known_word(const string &word) {
    known.insert(lowercase(word));
}

const WordProperties *Lexicon::find(const string &word) const {
    auto it = records.find(lowercase(word));
    return it == records.end() ? nullptr : &it->second;
}

bool Lexicon::is_known(const string &word) const {
    return known.count(lowercase(word)) > 0;
}

vector<string> Lexicon::entry_words() const {
    vector<string> out;
    for (const auto &[w, p] : records)
        out.push_back(w);
    return out;
}

string to_jsonl_line(const WordProperties &props) {
    return nlohmann::json(props).dump();
}

} // namespace swi::linguistics
