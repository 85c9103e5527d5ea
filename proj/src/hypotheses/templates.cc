#include "templates.h"

#include "../common/errors.h"

#include <fstream>
#include <set>

using namespace std;
using nlohmann::json;

namespace swi::hypotheses {

namespace {

template <typename E, size_t N>
string name_of(E value, const array<const char *, N> &names) {
    return names.at(static_cast<size_t>(value));
}

template <typename E, size_t N>
E parse_name(const string &s, const array<const char *, N> &names, const char *what) {
    for (size_t i = 0; i < N; ++i)
        if (s == names[i])
            return static_cast<E>(i);
    throw SchemaError(string("unknown ") + what + " '" + s + "'");
}

constexpr array<const char *, 18> effect_names{
    "meaning_aligned",   "base_anchored",      "structure_understood",     "word_sum_built",
    "rule_induced",      "family_generalized", "boundaries_restored",      "gpc_aligned",
    "origin_rationale",  "family_reinforced",  "morphemes_confirmed",      "cousins_explained",
    "false_relatives_excluded", "sound_map_aligned", "stable_despite_sound_change", "pattern_consistent",
    "homophone_distinguished",  "form_difference_noticed",
};

constexpr array<const char *, 18> action_names{
    "define_meaning",   "box_base",       "decompose",        "word_sum",          "inspect_suffix_rule",
    "build_matrix",     "segment_aloud",  "identify_graphemes", "trace_origin",    "sort_in_out",
    "verify_morphemes", "compare_cousins", "contrast_lookalikes", "map_phonemes",  "compare_relatives_sound",
    "compare_family_spelling", "sort_by_meaning", "visual_contrast",
};

constexpr array<const char *, 4> question_names{"meaning", "structure", "gpc", "relatives"};

string required_string(const json &t, const char *key, const string &where) {
    if (!t.contains(key) || !t.at(key).is_string())
        throw SchemaError(where + ": '" + key + "' must be a string");
    return t.at(key).get<string>();
}

vector<string> string_list(const json &t, const char *key, const string &where) {
    if (!t.contains(key))
        return {};
    if (!t.at(key).is_array())
        throw SchemaError(where + ": '" + key + "' must be a list");
    vector<string> out;
    for (const auto &v : t.at(key)) {
        if (!v.is_string())
            throw SchemaError(where + ": '" + key + "' must contain strings");
        out.push_back(v.get<string>());
    }
    return out;
}

} // namespace

string to_string(LearningEffect e) {
    return name_of(e, effect_names);
}
LearningEffect effect_from_string(const string &s) {
    return parse_name<LearningEffect>(s, effect_names, "learning effect");
}
string to_string(ActionBase a) {
    return name_of(a, action_names);
}
ActionBase action_from_string(const string &s) {
    return parse_name<ActionBase>(s, action_names, "action");
}
string to_string(QuestionType q) {
    return name_of(q, question_names);
}
QuestionType question_type_from_string(const string &s) {
    return parse_name<QuestionType>(s, question_names, "question type");
}

TemplateLibrary load_templates(const filesystem::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot open template definitions: " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError(string("template definitions: ") + e.what());
    }
    return templates_from_json(doc);
}

TemplateLibrary templates_from_json(const json &doc) {
    if (!doc.is_object() || !doc.contains("templates") || !doc.at("templates").is_array())
        throw SchemaError("template definitions need a 'templates' list");
    TemplateLibrary out;
    set<string> ids;
    set<LearningEffect> effects;
    for (const auto &t : doc.at("templates")) {
        if (!t.is_object())
            throw SchemaError("template entries must be objects");
        HypothesisTemplate h;
        h.id = required_string(t, "id", "template");
        const string where = "template " + h.id;
        if (h.id.size() < 2 || h.id[0] != 'H' || h.id.find_first_not_of("0123456789", 1) != string::npos)
            throw SchemaError(where + ": id must look like H<n>");
        if (!ids.insert(h.id).second)
            throw DuplicateId("duplicate template id " + h.id);
        h.name = required_string(t, "name", where);
        h.question_type = question_type_from_string(required_string(t, "question_type", where));
        h.category = analysis::category_from_string(required_string(t, "category", where));
        h.guard_text = required_string(t, "guard", where);
        try {
            h.guard = parse_guard(h.guard_text);
        } catch (const SchemaError &e) {
            throw SchemaError(where + ": " + e.what());
        }
        h.table_note = t.value("table_note", "");
        h.descriptor = required_string(t, "descriptor", where);
        h.evidence = string_list(t, "evidence", where);
        for (const string &ref : h.evidence)
            if (!is_evidence_ref(ref))
                throw SchemaError(where + ": evidence names unknown field '" + ref + "'");
        h.action = action_from_string(required_string(t, "action", where));
        if (!t.contains("warrant") || !t.at("warrant").is_object())
            throw SchemaError(where + ": 'warrant' must be an object");
        h.warrant.type = required_string(t.at("warrant"), "type", where);
        h.warrant.params = string_list(t.at("warrant"), "params", where);
        for (const string &p : h.warrant.params)
            if (find(h.evidence.begin(), h.evidence.end(), p) == h.evidence.end())
                throw SchemaError(where + ": warrant slot '" + p + "' is not an evidence binding");
        h.effect = effect_from_string(required_string(t, "effect", where));
        if (!effects.insert(h.effect).second)
            throw SchemaError(where + ": effect " + to_string(h.effect) + " already used by another template");
        if (t.contains("effect_preconditions")) {
            if (!t.at("effect_preconditions").is_array())
                throw SchemaError(where + ": 'effect_preconditions' must be a list of lists");
            for (const auto &group : t.at("effect_preconditions")) {
                if (!group.is_array() || group.empty())
                    throw SchemaError(where + ": each precondition group must be a non-empty list");
                vector<LearningEffect> any;
                for (const auto &e : group)
                    any.push_back(effect_from_string(e.get<string>()));
                h.effect_preconditions.push_back(any);
            }
        }
        h.optional = t.value("optional", false);
        if (t.contains("dialogue")) {
            const auto &d = t.at("dialogue");
            h.dialogue = {d.value("prompt", ""), d.value("feedback_true", ""), d.value("feedback_false", "")};
        }
        out.push_back(std::move(h));
    }
    for (int n = 1; n <= 18; ++n)
        if (!ids.count("H" + std::to_string(n)))
            throw SchemaError("template definitions are missing H" + std::to_string(n));
    if (out.size() != 18)
        throw SchemaError("expected exactly 18 templates, found " + std::to_string(out.size()));
    sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.number() < b.number(); });
    return out;
}

json templates_to_json(const TemplateLibrary &templates) {
    json list = json::array();
    for (const auto &h : templates) {
        json pre = json::array();
        for (const auto &group : h.effect_preconditions) {
            json g = json::array();
            for (auto e : group)
                g.push_back(to_string(e));
            pre.push_back(g);
        }
        list.push_back({{"id", h.id},
                        {"name", h.name},
                        {"question_type", to_string(h.question_type)},
                        {"category", analysis::to_string(h.category)},
                        {"guard", print_guard(h.guard)},
                        {"table_note", h.table_note},
                        {"descriptor", h.descriptor},
                        {"evidence", h.evidence},
                        {"action", to_string(h.action)},
                        {"warrant", {{"type", h.warrant.type}, {"params", h.warrant.params}}},
                        {"effect", to_string(h.effect)},
                        {"effect_preconditions", pre},
                        {"optional", h.optional},
                        {"dialogue",
                         {{"prompt", h.dialogue.prompt},
                          {"feedback_true", h.dialogue.feedback_true},
                          {"feedback_false", h.dialogue.feedback_false}}}});
    }
    return {{"version", "1.0.0"}, {"templates", list}};
}

const HypothesisTemplate &find_template(const TemplateLibrary &templates, const string &id) {
    for (const auto &t : templates)
        if (t.id == id)
            return t;
    throw SchemaError("no template with id " + id);
}

bool evaluate_guard(const HypothesisTemplate &t, const analysis::DiagnosticFeatures &features,
                    const linguistics::WordProperties &props, const GuardParams &params) {
    return evaluate(t.guard, features, props, params);
}

double score_descriptor(const HypothesisTemplate &t, const detection::AttemptContext &context,
                        const analysis::ErrorDiagnosis &diagnosis, const providers::ProviderHandle &provider) {
    json payload{{"template", t.id},
                 {"descriptor", t.descriptor},
                 {"category", analysis::to_string(t.category)},
                 {"attempt", context.attempt},
                 {"target", context.target},
                 {"sentence", context.sentence},
                 {"ranking", diagnosis.ranked_categories}};
    auto response = provider.complete({providers::Task::descriptor_score, payload});
    return response.payload.at("confidence").get<double>();
}

json offline_descriptor_score(const json &payload) {
    const string category = payload.at("category").get<string>();
    double confidence = 0.0;
    for (const auto &r : payload.at("ranking"))
        if (r.at("category").get<string>() == category)
            confidence = r.at("confidence").get<double>();
    return {{"confidence", confidence}};
}

} // namespace swi::hypotheses
