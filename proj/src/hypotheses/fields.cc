#include "fields.h"

#include "../common/errors.h"

#include <json.hpp>

#include <algorithm>

using namespace std;

namespace swi::hypotheses {

const vector<FieldInfo> &guard_fields() {
    using enum FieldType;
    static const vector<FieldInfo> fields{
        {"prefix_error", boolean, {}, true},
        {"suffix_error", boolean, {}, true},
        {"segmentation_error", boolean, {}, true},
        {"suffixing_change_applies", boolean, {}, true},
        {"phoneme_match", number, {}, true},
        {"phoneme_distance", number, {}, true},
        {"grapheme_mismatch_count", number, {}, true},
        {"morpheme_boundaries_preserved", boolean, {}, true},
        {"homophone_confusion", boolean, {}, true},
        {"visual_similarity_only", boolean, {}, true},
        {"morphemes_affected", number, {}, true},
        {"affix_count", number, {}},
        {"base_count", number, {}},
        {"morpheme_count", number, {}},
        {"relatives_sharing_base", number, {}},
        {"cousin_count", number, {}},
        {"homophone_count", number, {}},
        {"sound_shift_count", number, {}},
        {"has_etymology", boolean, {}},
        {"semantic_appropriateness", boolean, {}},
        {"syntactic_correctness", boolean, {}},
        {"meaning_understood", enumeration, {"yes", "no", "unknown"}},
    };
    return fields;
}

const FieldInfo *find_field(const string &name) {
    for (const FieldInfo &f : guard_fields())
        if (f.name == name)
            return &f;
    return nullptr;
}

string to_string(const Value &v) {
    if (auto b = get_if<bool>(&v))
        return *b ? "true" : "false";
    if (auto d = get_if<double>(&v))
        return nlohmann::json(*d).dump();
    return get<string>(v);
}

Value field_value(const string &name, const analysis::DiagnosticFeatures &f,
                  const linguistics::WordProperties &p) {
    auto count = [](size_t n) { return Value{static_cast<double>(n)}; };
    if (name == "prefix_error")
        return f.prefix_error;
    if (name == "suffix_error")
        return f.suffix_error;
    if (name == "segmentation_error")
        return f.segmentation_error;
    if (name == "suffixing_change_applies")
        return f.suffixing_change_applies;
    if (name == "phoneme_match")
        return f.phoneme_match;
    if (name == "phoneme_distance")
        return f.phoneme_distance();
    if (name == "grapheme_mismatch_count")
        return count(f.grapheme_mismatch_count);
    if (name == "morpheme_boundaries_preserved")
        return f.morpheme_boundaries_preserved;
    if (name == "homophone_confusion")
        return f.homophone_confusion;
    if (name == "visual_similarity_only")
        return f.visual_similarity_only;
    if (name == "morphemes_affected")
        return count(f.morphemes_affected);
    if (name == "affix_count")
        return count(p.prefixes.size() + p.suffixes.size());
    if (name == "base_count")
        return count(p.bases.size());
    if (name == "morpheme_count")
        return count(p.morphemes.size());
    if (name == "relatives_sharing_base")
        return count(linguistics::relatives_sharing_base(p));
    if (name == "cousin_count")
        return count(linguistics::cousin_count(p));
    if (name == "homophone_count")
        return count(p.homophones.size());
    if (name == "sound_shift_count")
        return count(p.sound_shift_relatives.size());
    if (name == "has_etymology")
        return p.etymology.has_value();
    if (name == "semantic_appropriateness")
        return p.semantic_appropriateness;
    if (name == "syntactic_correctness")
        return p.syntactic_correctness;
    if (name == "meaning_understood")
        return linguistics::to_string(p.meaning_understood);
    throw SchemaError("unknown guard field '" + name + "'");
}

bool is_evidence_ref(const string &ref) {
    static const vector<string> record_fields{
        "word",     "morphemes",     "bases",     "prefixes",   "suffixes",
        "graphemes", "phonemes",     "related_words", "etymology", "homophones",
        "sound_shift_relatives", "semantic_appropriateness", "syntactic_correctness",
        "meaning_understood", "context_sentence",
    };
    auto dot = ref.find('.');
    if (dot == string::npos)
        return false;
    const string scope = ref.substr(0, dot);
    const string field = ref.substr(dot + 1);
    if (scope == "target" || scope == "attempt")
        return find(record_fields.begin(), record_fields.end(), field) != record_fields.end();
    if (scope == "features")
        {
        const FieldInfo *info = find_field(field);
        return info && info->feature;
    }
    return false;
}

} // namespace swi::hypotheses
