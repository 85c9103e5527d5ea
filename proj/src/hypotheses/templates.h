#pragma once

#include "guard.h"

#include "../analysis/diagnosis.h"
#include "../detection/detector.h"
#include "../providers/provider.h"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace swi::hypotheses {

enum class LearningEffect {
    meaning_aligned,
    base_anchored,
    structure_understood,
    word_sum_built,
    rule_induced,
    family_generalized,
    boundaries_restored,
    gpc_aligned,
    origin_rationale,
    family_reinforced,
    morphemes_confirmed,
    cousins_explained,
    false_relatives_excluded,
    sound_map_aligned,
    stable_despite_sound_change,
    pattern_consistent,
    homophone_distinguished,
    form_difference_noticed,
};

enum class ActionBase {
    define_meaning,
    box_base,
    decompose,
    word_sum,
    inspect_suffix_rule,
    build_matrix,
    segment_aloud,
    identify_graphemes,
    trace_origin,
    sort_in_out,
    verify_morphemes,
    compare_cousins,
    contrast_lookalikes,
    map_phonemes,
    compare_relatives_sound,
    compare_family_spelling,
    sort_by_meaning,
    visual_contrast,
};

// Inquiry phases, in the order a trace visits them.
enum class QuestionType { meaning, structure, gpc, relatives };

std::string to_string(LearningEffect e);
LearningEffect effect_from_string(const std::string &s);
std::string to_string(ActionBase a);
ActionBase action_from_string(const std::string &s);
std::string to_string(QuestionType q);
QuestionType question_type_from_string(const std::string &s);

struct WarrantSpec {
    std::string type;
    std::vector<std::string> params; // evidence references

    bool operator==(const WarrantSpec &) const = default;
};

struct Dialogue {
    std::string prompt;
    std::string feedback_true;
    std::string feedback_false;

    bool operator==(const Dialogue &) const = default;
};

struct HypothesisTemplate {
    std::string id; // "H1".."H18"
    std::string name;
    QuestionType question_type = QuestionType::meaning;
    analysis::ErrorCategory category = analysis::ErrorCategory::gpc_mismatch;
    std::string guard_text;
    GuardExpr guard;
    std::string table_note;
    std::string descriptor;
    std::vector<std::string> evidence;
    ActionBase action = ActionBase::define_meaning;
    WarrantSpec warrant;
    LearningEffect effect = LearningEffect::meaning_aligned;
    // Each inner list is satisfied when any one of its effects already holds;
    // all lists must be satisfied.
    std::vector<std::vector<LearningEffect>> effect_preconditions;
    bool optional = false;
    Dialogue dialogue;

    int number() const { return std::stoi(id.substr(1)); }
    bool operator==(const HypothesisTemplate &) const = default;
};

using TemplateLibrary = std::vector<HypothesisTemplate>;

// Loads and checks the definition file: exactly H1..H18, unique ids, guards
// well-typed, evidence references valid, warrant slots drawn from evidence,
// one effect per template. Throws SchemaError / DuplicateId.
TemplateLibrary load_templates(const std::filesystem::path &file);
TemplateLibrary templates_from_json(const nlohmann::json &doc);
nlohmann::json templates_to_json(const TemplateLibrary &templates);

const HypothesisTemplate &find_template(const TemplateLibrary &templates, const std::string &id);

bool evaluate_guard(const HypothesisTemplate &t, const analysis::DiagnosticFeatures &features,
                    const linguistics::WordProperties &props, const GuardParams &params = default_guard_params());

// Soft confidence for a template whose guard already holds.
double score_descriptor(const HypothesisTemplate &t, const detection::AttemptContext &context,
                        const analysis::ErrorDiagnosis &diagnosis, const providers::ProviderHandle &provider);

// Offline handler for descriptor_score: the diagnosis confidence of the
// template's error category, 0 when the category is not ranked.
nlohmann::json offline_descriptor_score(const nlohmann::json &payload);

} // namespace swi::hypotheses
