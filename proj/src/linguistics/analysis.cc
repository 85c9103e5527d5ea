#include "analysis.h"

#include <algorithm>
#include <cctype>

using namespace std;

namespace swi::linguistics {

namespace {
bool is_vowel(char c) {
    return string("aeiou").find(c) != string::npos;
}

size_t owner_of(const vector<pair<size_t, size_t>> &spans, size_t pos) {
    for (size_t k = 0; k < spans.size(); ++k)
        if (pos >= spans[k].first && pos < spans[k].second)
            return k;
    return spans.empty() ? 0 : spans.size() - 1;
}
} // namespace

AttemptProjection project(const string &attempt, const string &target) {
    AttemptProjection p;
    const string t = lowercase(target);
    p.chars = diff_chars(lowercase(attempt), t);
    for (const EditOp &op : p.chars.ops) {
        switch (op.kind) {
        case EditKind::match:
        case EditKind::substitute:
            p.anchor.push_back(op.target_pos);
            p.extra.push_back(false);
            break;
        case EditKind::remove:
            // A doubled letter joins the letter it repeats.
            if (op.target_pos < t.size() && op.source == string(1, t[op.target_pos]))
                p.anchor.push_back(op.target_pos);
            else
                p.anchor.push_back(op.target_pos > 0 ? op.target_pos - 1 : 0);
            p.extra.push_back(true);
            break;
        case EditKind::insert:
            break;
        }
    }
    return p;
}

WordProperties derive_attempt_properties(const string &attempt, const WordProperties &target,
                                         const GraphemePhonemeCorpus &corpus) {
    const string a = lowercase(attempt);
    const AttemptProjection proj = project(a, target.word);
    const auto gspans = grapheme_spans(target);

    // Chars per target grapheme; spaces become their own units.
    vector<vector<string>> pieces(target.graphemes.size());
    for (size_t i = 0; i < a.size(); ++i) {
        size_t k = owner_of(gspans, proj.anchor[i]);
        auto &units = pieces[k];
        if (a[i] == ' ') {
            units.emplace_back(" ");
        } else if (units.empty() || units.back() == " " ||
                   (proj.extra[i] && !corpus.knows(units.back() + a[i]))) {
            units.emplace_back(1, a[i]);
        } else {
            units.back() += a[i];
        }
    }

    WordProperties out;
    out.word = attempt;
    out.context_sentence = target.context_sentence;
    out.semantic_appropriateness = target.semantic_appropriateness;
    out.syntactic_correctness = target.syntactic_correctness;
    out.meaning_understood = Tristate::unknown;

    vector<size_t> source_grapheme;
    for (size_t k = 0; k < pieces.size(); ++k) {
        for (const string &unit : pieces[k]) {
            out.graphemes.push_back(unit);
            source_grapheme.push_back(k);
        }
    }
    for (size_t u = 0; u < out.graphemes.size(); ++u) {
        const string &ag = out.graphemes[u];
        const size_t k = source_grapheme[u];
        const string &tg = lowercase(target.graphemes[k]);
        const string &tp = target.phonemes[k];
        string phoneme;
        if (ag == " ") {
            phoneme = SILENT;
        } else if (ag == tg) {
            phoneme = tp;
        } else if (!is_silent(tp) && corpus.attests(tp, ag)) {
            phoneme = tp;
        } else if (ag == "e" && u + 1 == out.graphemes.size() && u > 0 &&
                   !is_vowel(out.graphemes[u - 1].back())) {
            phoneme = SILENT; // final marker e
        } else if (auto p = corpus.phoneme_for(ag)) {
            phoneme = *p;
        } else {
            phoneme = "/?/";
        }
        out.phonemes.push_back(phoneme);
    }

    // Morpheme segments follow the target's morpheme spans.
    const auto mspans = morpheme_spans(target);
    vector<string> segments(target.morphemes.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == ' ')
            continue;
        size_t pos = proj.anchor[i];
        size_t m = 0;
        for (size_t k = 0; k < mspans.size(); ++k)
            if (mspans[k].first <= pos)
                m = k;
        if (!segments.empty())
            segments[m] += a[i];
    }
    for (size_t k = 0; k < segments.size(); ++k) {
        if (segments[k].empty())
            continue;
        const string &tm = target.morphemes[k];
        string seg = segments[k];
        if (!tm.empty() && tm.front() == '-')
            seg = "-" + seg;
        if (!tm.empty() && tm.back() == '-')
            seg += "-";
        out.morphemes.push_back(seg);
        const string plain = strip_connector(tm);
        if (find(target.prefixes.begin(), target.prefixes.end(), tm) != target.prefixes.end())
            out.prefixes.push_back(seg);
        else if (find(target.suffixes.begin(), target.suffixes.end(), tm) != target.suffixes.end())
            out.suffixes.push_back(seg);
        else if (any_of(target.bases.begin(), target.bases.end(),
                        [&](const string &b) { return plain.find(b) != string::npos; }))
            out.bases.push_back(strip_connector(seg));
    }
    return out;
}

size_t grapheme_mismatch_count(const WordProperties &attempt, const WordProperties &target) {
    vector<string> a, t;
    for (const string &g : attempt.graphemes)
        a.push_back(lowercase(g));
    for (const string &g : target.graphemes)
        t.push_back(lowercase(g));
    return diff(a, t).cost;
}

vector<string> sounded_phonemes(const WordProperties &props) {
    vector<string> out;
    for (const string &p : props.phonemes)
        if (!is_silent(p))
            out.push_back(normalize_phoneme(p));
    return out;
}

double phoneme_match(const WordProperties &attempt, const WordProperties &target) {
    const auto a = sounded_phonemes(attempt);
    const auto t = sounded_phonemes(target);
    const size_t longest = max(a.size(), t.size());
    if (longest == 0)
        return 1.0;
    return 1.0 - static_cast<double>(edit_distance(a, t)) / static_cast<double>(longest);
}

} // namespace swi::linguistics
