#include "detector.h"

#include "../common/errors.h"
#include "../linguistics/edit_script.h"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <set>

using namespace std;
using nlohmann::json;

namespace swi::detection {

namespace {
const set<string> &stopwords() {
    static const set<string> words{
        "a",    "an",   "the",  "and",  "or",   "but",  "of",   "to",   "in",    "on",   "at",
        "for",  "with", "is",   "was",  "were", "be",   "it",   "i",    "we",    "you",  "he",
        "she",  "they", "my",   "your", "our",  "his",  "her",  "their", "there", "this", "that",
        "as",   "so",   "not",  "me",   "us",   "them", "by",   "from", "if",    "are",  "am",
        "can",  "will", "do",   "did",  "had",  "has",  "have", "over", "up",    "out",  "what",
    };
    return words;
}

bool word_char(char c) {
    return isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
}

struct Token {
    string text;
    size_t start;
    size_t end;
};

vector<Token> tokenize(const string &doc) {
    vector<Token> out;
    size_t i = 0;
    while (i < doc.size()) {
        if (!word_char(doc[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < doc.size() && word_char(doc[j]))
            ++j;
        out.push_back({doc.substr(i, j - i), i, j});
        i = j;
    }
    return out;
}

size_t shared_prefix(const string &a, const string &b) {
    size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n])
        ++n;
    return n;
}

size_t overlap(const vector<string> &a, const vector<string> &b, const string &exclude_a,
               const string &exclude_b) {
    set<string> bs(b.begin(), b.end());
    bs.erase(exclude_b);
    set<string> seen;
    size_t n = 0;
    for (const string &w : a)
        if (w != exclude_a && bs.count(w) && seen.insert(w).second)
            ++n;
    return n;
}
} // namespace

vector<string> content_words(const string &text) {
    vector<string> out;
    for (const Token &t : tokenize(text)) {
        string w = linguistics::lowercase(t.text);
        if (!stopwords().count(w))
            out.push_back(w);
    }
    return out;
}

string sentence_around(const string &doc, size_t pos) {
    auto is_end = [](char c) { return c == '.' || c == '!' || c == '?'; };
    size_t start = pos;
    while (start > 0 && !is_end(doc[start - 1]))
        --start;
    size_t end = pos;
    while (end < doc.size() && !is_end(doc[end]))
        ++end;
    if (end < doc.size())
        ++end;
    while (start < end && isspace(static_cast<unsigned char>(doc[start])))
        ++start;
    return doc.substr(start, end - start);
}

OfflineDetector::OfflineDetector(const linguistics::Lexicon &lexicon, DetectionWeights weights)
    : lexicon(lexicon), weights(weights) {}

json OfflineDetector::predict(const json &payload) const {
    const string doc = payload.at("document").get<string>();
    json errors = json::array();
    for (const Token &tok : tokenize(doc)) {
        const string word = linguistics::lowercase(tok.text);
        const string sentence = sentence_around(doc, tok.start);
        const vector<string> sentence_words = content_words(sentence);

        if (lexicon.is_known(word)) {
            const auto *entry = lexicon.find(word);
            if (!entry || entry->homophones.empty())
                continue;
            size_t own = overlap(sentence_words, content_words(entry->context_sentence), word, word);
            const linguistics::WordProperties *better = nullptr;
            size_t best = own;
            for (const string &h : entry->homophones) {
                const auto *alt = lexicon.find(h);
                if (!alt)
                    continue;
                size_t fit = overlap(sentence_words, content_words(alt->context_sentence), word,
                                     linguistics::lowercase(alt->word));
                if (fit > best) {
                    best = fit;
                    better = alt;
                }
            }
            if (better)
                errors.push_back({{"attempt", tok.text},
                                  {"target", better->word},
                                  {"start", tok.start},
                                  {"end", tok.end},
                                  {"uncertain", false},
                                  {"alternates", json::array()}});
            continue;
        }

        struct Candidate {
            double score;
            size_t distance;
            string word;
        };
        vector<Candidate> ranked;
        for (const auto &[key, props] : lexicon.entries()) {
            size_t dist = linguistics::edit_distance(word, key);
            double score = -weights.edit * static_cast<double>(dist) +
                           weights.prefix * static_cast<double>(shared_prefix(word, key)) +
                           weights.context * static_cast<double>(overlap(
                                                 sentence_words, content_words(props.context_sentence), word, key));
            ranked.push_back({score, dist, props.word});
        }
        if (ranked.empty())
            continue;
        sort(ranked.begin(), ranked.end(), [](const Candidate &a, const Candidate &b) {
            if (a.score != b.score)
                return a.score > b.score;
            return a.word < b.word;
        });
        const Candidate &top = ranked.front();
        bool uncertain = top.distance > max<size_t>(2, word.size() / 2) ||
                         (ranked.size() > 1 && ranked[1].score == top.score);
        json alternates = json::array();
        for (size_t k = 1; k < ranked.size() && k < 3; ++k)
            alternates.push_back(ranked[k].word);
        errors.push_back({{"attempt", tok.text},
                          {"target", top.word},
                          {"start", tok.start},
                          {"end", tok.end},
                          {"uncertain", uncertain},
                          {"alternates", alternates}});
    }
    return {{"errors", errors}};
}

DetectionReport detect(const string &document, const providers::ProviderHandle &provider, Trigger trigger) {
    if (document.empty())
        throw SchemaError("document is empty");
    auto response = provider.complete({providers::Task::target_prediction, {{"document", document}}});
    DetectionReport report;
    report.trigger = trigger;
    for (const auto &e : response.payload.at("errors")) {
        AttemptContext ctx;
        ctx.attempt = e.at("attempt").get<string>();
        ctx.target = e.at("target").get<string>();
        ctx.span = {e.at("start").get<size_t>(), e.at("end").get<size_t>()};
        ctx.uncertain = e.value("uncertain", false);
        if (e.contains("alternates"))
            ctx.alternates = e.at("alternates").get<vector<string>>();
        if (ctx.span.second > document.size() || ctx.span.first >= ctx.span.second ||
            document.substr(ctx.span.first, ctx.span.second - ctx.span.first) != ctx.attempt)
            throw SchemaViolation("target_prediction span does not match attempt '" + ctx.attempt + "'");
        if (linguistics::lowercase(ctx.attempt) == linguistics::lowercase(ctx.target))
            ctx.uncertain = true;
        ctx.sentence = sentence_around(document, ctx.span.first);
        ctx.document_excerpt = document;
        if (!ctx.alternates.empty())
            clog << "detect: '" << ctx.attempt << "' -> '" << ctx.target << "' (alternates:"
                 << [&] {
                        string s;
                        for (const auto &a : ctx.alternates)
                            s += " " + a;
                        return s;
                    }()
                 << ")\n";
        report.contexts.push_back(std::move(ctx));
    }
    sort(report.contexts.begin(), report.contexts.end(),
         [](const AttemptContext &a, const AttemptContext &b) { return a.span < b.span; });
    for (size_t i = 1; i < report.contexts.size(); ++i)
        if (report.contexts[i].span.first < report.contexts[i - 1].span.second)
            throw SchemaViolation("target_prediction returned overlapping spans");
    return report;
}

string to_string(Trigger t) {
    return t == Trigger::pause ? "pause" : "explicit_check";
}

void to_json(json &j, const AttemptContext &c) {
    j = json{{"attempt", c.attempt},
             {"target", c.target},
             {"sentence", c.sentence},
             {"document_excerpt", c.document_excerpt},
             {"span", {c.span.first, c.span.second}},
             {"uncertain", c.uncertain},
             {"alternates", c.alternates}};
}

void from_json(const json &j, AttemptContext &c) {
    if (!j.is_object())
        throw SchemaError("attempt context must be an object");
    for (const char *key : {"attempt", "target"})
        if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<string>().empty())
            throw SchemaError(string("attempt context needs a non-empty string '") + key + "'");
    c.attempt = j.at("attempt").get<string>();
    c.target = j.at("target").get<string>();
    c.sentence = j.value("sentence", "");
    c.document_excerpt = j.value("document_excerpt", c.sentence);
    c.uncertain = j.value("uncertain", false);
    c.alternates = j.value("alternates", vector<string>{});
    if (j.contains("span")) {
        const auto &s = j.at("span");
        if (!s.is_array() || s.size() != 2)
            throw SchemaError("span must be [start, end]");
        c.span = {s[0].get<size_t>(), s[1].get<size_t>()};
    } else {
        size_t pos = c.document_excerpt.find(c.attempt);
        if (pos == string::npos) {
            c.document_excerpt = c.attempt;
            pos = 0;
        }
        c.span = {pos, pos + c.attempt.size()};
    }
    if (c.span.second > c.document_excerpt.size() ||
        c.document_excerpt.substr(c.span.first, c.span.second - c.span.first) != c.attempt)
        throw SchemaError("span does not select the attempt inside document_excerpt");
}

void to_json(json &j, const DetectionReport &r) {
    j = json{{"contexts", r.contexts}, {"trigger", to_string(r.trigger)}};
}

} // namespace swi::detection
