#include "features.h"

#include "../linguistics/analysis.h"

#include <algorithm>
#include <set>

using namespace std;
using namespace swi::linguistics;

namespace swi::analysis {

namespace {

// Target character each edit lands on. Extra attempt characters count
// against the target character they follow.
vector<size_t> edit_positions(const EditScript &script, size_t target_len) {
    vector<size_t> out;
    for (const EditOp &op : script.edits()) {
        size_t pos = op.target_pos;
        if (op.kind == EditKind::remove && pos > 0)
            --pos;
        out.push_back(min(pos, target_len == 0 ? 0 : target_len - 1));
    }
    return out;
}

bool is_listed(const vector<string> &list, const string &m) {
    return find(list.begin(), list.end(), m) != list.end();
}

} // namespace

DiagnosticFeatures compute_features(const WordProperties &attempt, const WordProperties &target,
                                    const SuffixingRules &rules, double epsilon) {
    DiagnosticFeatures f;
    const string a = lowercase(attempt.word);
    const string t = lowercase(target.word);

    f.grapheme_mismatch_count = grapheme_mismatch_count(attempt, target);
    f.phoneme_match = std::clamp(phoneme_match(attempt, target), 0.0, 1.0);
    if (a == t)
        return f;

    const AttemptProjection proj = project(a, t);
    const auto edits = proj.chars.edits();
    for (const EditOp &op : edits)
        if (op.source == " " || op.target == " ")
            f.segmentation_error = true;

    const vector<size_t> positions = edit_positions(proj.chars, t.size());
    const auto spans = morpheme_spans(target);
    auto edits_in = [&](size_t lo, size_t hi) {
        return static_cast<size_t>(
            count_if(positions.begin(), positions.end(), [&](size_t p) { return p >= lo && p < hi; }));
    };

    for (size_t k = 0; k < spans.size(); ++k) {
        const auto [lo, hi] = spans[k];
        const size_t n = edits_in(lo, hi);
        if (n > 0)
            ++f.morphemes_affected;
        const string &m = target.morphemes[k];
        const bool over_half = 2 * n > (hi - lo);
        if (is_listed(target.prefixes, m) && over_half)
            f.prefix_error = true;
        if (is_listed(target.suffixes, m) && over_half)
            f.suffix_error = true;
    }

    // Boundaries hold when every target morpheme keeps at least one letter.
    vector<size_t> kept(spans.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == ' ')
            continue;
        for (size_t k = 0; k < spans.size(); ++k)
            if (proj.anchor[i] >= spans[k].first && proj.anchor[i] < spans[k].second)
                ++kept[k];
    }
    f.morpheme_boundaries_preserved =
        !f.segmentation_error && all_of(kept.begin(), kept.end(), [](size_t n) { return n > 0; });

    // A junction rule is implicated when the base needs a change before its
    // suffix and the attempt differs near that junction.
    for (size_t k = 0; k + 1 < spans.size(); ++k) {
        const string &next = target.morphemes[k + 1];
        if (!is_listed(target.suffixes, next))
            continue;
        const string morpheme = lowercase(strip_connector(target.morphemes[k]));
        for (const string &base : target.bases) {
            const string b = lowercase(base);
            if (morpheme.find(b) == string::npos)
                continue;
            if (!rules.required_change(b, next))
                continue;
            const size_t junction = spans[k].second;
            const size_t lo = junction >= 2 ? junction - 2 : 0;
            if (edits_in(lo, junction + 2) > 0)
                f.suffixing_change_applies = true;
        }
    }

    const string attempt_word = lowercase(attempt.word);
    f.homophone_confusion = any_of(target.homophones.begin(), target.homophones.end(),
                                   [&](const string &h) { return lowercase(h) == attempt_word; });

    f.visual_similarity_only = f.grapheme_mismatch_count <= 2 && f.phoneme_distance() > epsilon &&
                               !f.segmentation_error && !f.prefix_error && !f.suffix_error &&
                               !f.suffixing_change_applies && !f.homophone_confusion;
    return f;
}

void to_json(nlohmann::json &j, const DiagnosticFeatures &f) {
    j = nlohmann::json{{"prefix_error", f.prefix_error},
                       {"suffix_error", f.suffix_error},
                       {"segmentation_error", f.segmentation_error},
                       {"suffixing_change_applies", f.suffixing_change_applies},
                       {"phoneme_match", f.phoneme_match},
                       {"grapheme_mismatch_count", f.grapheme_mismatch_count},
                       {"morpheme_boundaries_preserved", f.morpheme_boundaries_preserved},
                       {"homophone_confusion", f.homophone_confusion},
                       {"visual_similarity_only", f.visual_similarity_only},
                       {"morphemes_affected", f.morphemes_affected}};
}

void from_json(const nlohmann::json &j, DiagnosticFeatures &f) {
    f.prefix_error = j.at("prefix_error").get<bool>();
    f.suffix_error = j.at("suffix_error").get<bool>();
    f.segmentation_error = j.at("segmentation_error").get<bool>();
    f.suffixing_change_applies = j.at("suffixing_change_applies").get<bool>();
    f.phoneme_match = j.at("phoneme_match").get<double>();
    f.grapheme_mismatch_count = j.at("grapheme_mismatch_count").get<size_t>();
    f.morpheme_boundaries_preserved = j.at("morpheme_boundaries_preserved").get<bool>();
    f.homophone_confusion = j.at("homophone_confusion").get<bool>();
    f.visual_similarity_only = j.at("visual_similarity_only").get<bool>();
    f.morphemes_affected = j.value("morphemes_affected", size_t{0});
}

} // namespace swi::analysis
