#include "synthesis.h"

#include "../common/errors.h"
#include "../detection/detector.h"
#include "../linguistics/analysis.h"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

using namespace std;
using nlohmann::json;
using namespace swi::linguistics;
using swi::hypotheses::ActionBase;

namespace swi::program {

string fill(const string &text, const map<string, string> &values) {
    auto mentions_empty = [&](const string &clause) {
        for (const auto &[k, v] : values)
            if (v.empty() && clause.find("{" + k + "}") != string::npos)
                return true;
        return false;
    };
    vector<string> clauses;
    size_t from = 0;
    while (true) {
        size_t at = text.find("; ", from);
        clauses.push_back(text.substr(from, at == string::npos ? string::npos : at - from));
        if (at == string::npos)
            break;
        from = at + 2;
    }
    string kept;
    for (const auto &c : clauses)
        if (!mentions_empty(c))
            kept += (kept.empty() ? "" : "; ") + c;
    if (clauses.size() > 1 && !kept.empty() && kept.back() != '.' && text.back() == '.')
        kept += '.';

    string out;
    for (size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] == '{') {
            size_t close = kept.find('}', i);
            if (close != string::npos) {
                auto it = values.find(kept.substr(i + 1, close - i - 1));
                if (it != values.end()) {
                    out += it->second;
                    i = close;
                    continue;
                }
            }
        }
        out += kept[i];
    }
    return out;
}

namespace {

string join(const vector<string> &items, const string &sep) {
    string out;
    for (const auto &s : items)
        out += (out.empty() ? "" : sep) + s;
    return out;
}

string quoted_list(const vector<string> &items, const string &last_sep) {
    string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i > 0)
            out += i + 1 == items.size() ? last_sep : ", ";
        out += "\"" + items[i] + "\"";
    }
    return out;
}

string number_word(size_t n) {
    static const char *words[] = {"zero", "one", "two", "three", "four", "five", "six"};
    return n < 7 ? words[n] : std::to_string(n);
}

string fnv1a_hex(const string &s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    ostringstream os;
    os << hex << setw(16) << setfill('0') << h;
    return os.str();
}

string longest_common_substring(const string &a, const string &b) {
    string best;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) {
            size_t k = 0;
            while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k])
                ++k;
            if (k > best.size())
                best = a.substr(i, k);
        }
    return best;
}

// The grapheme difference a grapheme-level step talks about: the first
// substitution voicing a sounded phoneme, else the first such edit.
struct GraphemeFocus {
    string phoneme;
    string target_grapheme;
    string attempt_grapheme;
    size_t target_index = 0;
};

GraphemeFocus grapheme_focus(const WordProperties &target, const WordProperties &attempt) {
    const auto edits = diff(attempt.graphemes, target.graphemes).edits();
    auto describe = [&](const EditOp &op) {
        GraphemeFocus f;
        f.target_index = min(op.target_pos, target.graphemes.size() - 1);
        f.target_grapheme = target.graphemes[f.target_index];
        f.phoneme = target.phonemes[f.target_index];
        f.attempt_grapheme = op.kind == EditKind::insert ? "" : op.source;
        return f;
    };
    for (auto pass : {0, 1})
        for (const auto &op : edits) {
            if (pass == 0 && op.kind != EditKind::substitute)
                continue;
            auto f = describe(op);
            if (!is_silent(f.phoneme))
                return f;
        }
    if (!edits.empty())
        return describe(edits.front());
    return {target.phonemes.front(), target.graphemes.front(), attempt.graphemes.front(), 0};
}

vector<string> family(const WordProperties &target, const string &base) {
    vector<string> out;
    for (const auto &r : target.related_words)
        if (lowercase(r) != lowercase(target.word) && lowercase(r).find(base) != string::npos)
            out.push_back(r);
    return out;
}

vector<string> cousins(const WordProperties &target, const string &base) {
    vector<string> out;
    for (const auto &r : target.related_words)
        if (lowercase(r) != lowercase(target.word) && lowercase(r).find(base) == string::npos)
            out.push_back(r);
    return out;
}

struct Builder {
    const WordProperties &target;
    const WordProperties &attempt;
    const SynthesisKnowledge &k;
    string base;
    pair<size_t, size_t> base_in_attempt{0, 0};
    GraphemeFocus focus;
    map<string, string> values;

    Builder(const WordProperties &t, const WordProperties &a, const SynthesisKnowledge &knowledge)
        : target(t), attempt(a), k(knowledge) {
        base = lowercase(target.bases.empty() ? strip_connector(target.morphemes.front()) : target.bases.front());
        locate_base();
        focus = grapheme_focus(target, attempt);
        common_values();
    }

    void locate_base() {
        const string tw = lowercase(target.word), aw = lowercase(attempt.word);
        size_t bs = tw.find(base);
        if (bs == string::npos) {
            base_in_attempt = {0, aw.size()};
            return;
        }
        const size_t be = bs + base.size();
        auto proj = project(aw, tw);
        size_t lo = aw.size(), hi = 0;
        for (size_t i = 0; i < proj.anchor.size(); ++i)
            if (proj.anchor[i] >= bs && proj.anchor[i] < be) {
                lo = min(lo, i);
                hi = max(hi, i + 1);
            }
        base_in_attempt = lo < hi ? make_pair(lo, hi) : make_pair(size_t{0}, aw.size());
    }

    string contrast_word() const {
        for (const auto &w : k.corpus.examples(focus.phoneme, focus.target_grapheme))
            if (w != target.word && w != attempt.word && w.find(base) == string::npos)
                return w;
        return "";
    }

    void common_values() {
        values["attempt"] = attempt.word;
        values["target"] = target.word;
        values["base"] = base;
        values["context_sentence"] = target.context_sentence;
        values["phoneme"] = focus.phoneme;
        values["target_grapheme"] = focus.target_grapheme;
        values["attempt_grapheme"] = focus.attempt_grapheme;
        values["contrast_word"] = contrast_word();

        vector<string> map_items;
        for (size_t i = 0; i < target.graphemes.size(); ++i)
            map_items.push_back(is_silent(target.phonemes[i]) ? "<" + target.graphemes[i] + "> silent"
                                                              : target.phonemes[i] + " <" + target.graphemes[i] + ">");
        values["sound_map"] = join(map_items, ", ");

        vector<string> parts;
        for (const auto &m : target.morphemes)
            parts.push_back(strip_connector(m));
        values["word_sum"] = join(parts, " + ") + " -> " + target.word;
        values["word_sum_blank"] = join(vector<string>(parts.size(), "___"), " + ");
        vector<string> boxed;
        for (const auto &m : target.morphemes)
            boxed.push_back("<" + m + ">");
        values["morpheme_list"] = join(boxed, ", ");

        const string suffix = target.suffixes.empty() ? "" : strip_connector(target.suffixes.front());
        values["suffix"] = suffix;
        string rule = "Just add the suffix.";
        if (!suffix.empty())
            if (auto change = k.rules.required_change(base, suffix))
                for (const auto &r : k.rules.rules())
                    if (r.kind == *change)
                        rule = r.description;
        values["rule_description"] = rule;

        size_t words = 1 + count(target.word.begin(), target.word.end(), ' ');
        values["word_count"] = number_word(words);

        if (target.etymology) {
            values["origin_language"] = target.etymology->origin_language;
            values["root"] = target.etymology->root;
            values["gloss"] = target.etymology->gloss;
        }
        const auto fam = family(target, base);
        values["relatives"] = quoted_list(fam, " and ");
        values["relatives_sample"] = quoted_list(vector<string>(fam.begin(), fam.begin() + min<size_t>(2, fam.size())),
                                                 " and ");
        values["cousins"] = join(cousins(target, base), ", ");
        values["shift_word"] = target.sound_shift_relatives.empty() ? "" : target.sound_shift_relatives.front();

        string homophone;
        for (const auto &h : target.homophones)
            if (lowercase(h) == lowercase(attempt.word))
                homophone = h;
        if (homophone.empty() && !target.homophones.empty())
            homophone = target.homophones.front();
        values["homophone"] = homophone;
        string blank = target.context_sentence;
        if (auto at = lowercase(blank).find(lowercase(target.word)); at != string::npos)
            blank.replace(at, target.word.size(), "___");
        values["blank_sentence"] = blank;
        values["options_text"] = quoted_list(sorted({attempt.word, target.word}), " or ");
    }

    static vector<string> sorted(vector<string> v) {
        sort(v.begin(), v.end());
        v.erase(unique(v.begin(), v.end()), v.end());
        return v;
    }

    vector<string> distractors(const set<string> &avoid, size_t n) const {
        vector<string> first_letter, any;
        set<string> seen;
        for (const auto &p : k.corpus.phonemes())
            for (const auto &s : k.corpus.spellings(p)) {
                const string &w = s.example;
                if (w.empty() || avoid.count(w) || w.find(base) != string::npos || !seen.insert(w).second)
                    continue;
                (w[0] == base[0] ? first_letter : any).push_back(w);
            }
        first_letter.insert(first_letter.end(), any.begin(), any.end());
        first_letter.resize(min(n, first_letter.size()));
        return first_letter;
    }

    static VerificationCondition exact(vector<string> values) {
        return {VerificationKind::exact_match, {{"values", values}}, false};
    }
    static VerificationCondition membership(vector<string> members) {
        return {VerificationKind::set_membership, {{"members", members}}, false};
    }

    json reveal_payload(string &instruction) const {
        json changes = json::array();
        vector<string> phrases;
        for (const auto &op : diff_chars(lowercase(attempt.word), lowercase(target.word)).edits()) {
            changes.push_back({{"kind", to_string(op.kind)}, {"at", op.source_pos}, {"from", op.source}, {"to", op.target}});
            if (op.kind == EditKind::substitute)
                phrases.push_back("<" + op.source + "> changes to <" + op.target + ">");
            else if (op.kind == EditKind::insert)
                phrases.push_back(op.target == " " ? "a space is added" : "<" + op.target + "> is added");
            else
                phrases.push_back(op.source == " " ? "the space is removed" : "<" + op.source + "> is removed");
        }
        instruction = "Watch \"" + attempt.word + "\" become \"" + target.word + "\": " + join(phrases, ", ") + ".";
        return {{"from", attempt.word}, {"to", target.word}, {"changes", changes}};
    }

    // Affordance, options and verification for a template's action.
    void shape(PlanNode &n, const hypotheses::HypothesisTemplate &t, bool &wants_reveal) {
        const auto fam = family(target, base);
        switch (t.action) {
        case ActionBase::define_meaning: {
            auto keywords = detection::content_words(target.context_sentence);
            if (find(keywords.begin(), keywords.end(), lowercase(target.word)) == keywords.end())
                keywords.push_back(lowercase(target.word));
            n.affordance = Affordance::speech_text;
            n.verification = VerificationCondition{
                VerificationKind::semantic_check, {{"target", target.word}, {"keywords", keywords}}, true};
            break;
        }
        case ActionBase::box_base:
            n.affordance = Affordance::free_text;
            n.verification = exact({base});
            break;
        case ActionBase::decompose:
            n.affordance = Affordance::highlight_span;
            n.verification = VerificationCondition{
                VerificationKind::span_overlaps_base,
                {{"base", base}, {"start", base_in_attempt.first}, {"end", base_in_attempt.second}},
                false};
            break;
        case ActionBase::word_sum: {
            vector<string> parts;
            for (const auto &m : target.morphemes)
                parts.push_back(lowercase(strip_connector(m)));
            const string sum = join(parts, "+");
            n.affordance = Affordance::free_text;
            n.verification = exact({sum, sum + "=" + lowercase(target.word), sum + "->" + lowercase(target.word)});
            break;
        }
        case ActionBase::inspect_suffix_rule: {
            static const map<string, string> answer{{"doubling", "double the last consonant"},
                                                    {"e_drop", "drop the final e"},
                                                    {"y_to_i", "change y to i"}};
            string correct = "just add the suffix";
            if (auto change = k.rules.required_change(base, values["suffix"]))
                correct = answer.at(analysis::to_string(*change));
            n.affordance = Affordance::multiple_choice;
            n.options = sorted({"double the last consonant", "drop the final e", "change y to i",
                                "just add the suffix"});
            n.verification = exact({correct});
            break;
        }
        case ActionBase::build_matrix:
        case ActionBase::compare_family_spelling: {
            vector<string> members(fam.begin(), fam.begin() + min<size_t>(4, fam.size()));
            set<string> avoid(target.related_words.begin(), target.related_words.end());
            avoid.insert(target.word);
            auto opts = members;
            for (const auto &d : distractors(avoid, 2))
                opts.push_back(d);
            n.affordance = Affordance::drag_sort;
            n.options = sorted(opts);
            n.verification = membership(members);
            values["candidates"] = join(n.options, ", ");
            break;
        }
        case ActionBase::segment_aloud:
            n.affordance = Affordance::free_text;
            n.verification = exact({lowercase(target.word)});
            break;
        case ActionBase::identify_graphemes: {
            vector<string> opts{focus.target_grapheme};
            if (!focus.attempt_grapheme.empty())
                opts.push_back(focus.attempt_grapheme);
            for (const auto &s : k.corpus.spellings(focus.phoneme))
                if (opts.size() < 4 && find(opts.begin(), opts.end(), s.grapheme) == opts.end())
                    opts.push_back(s.grapheme);
            n.affordance = Affordance::multiple_choice;
            n.options = sorted(opts);
            n.verification = exact({focus.target_grapheme});
            wants_reveal = true;
            break;
        }
        case ActionBase::trace_origin: {
            string shared = target.etymology ? longest_common_substring(lowercase(target.etymology->root),
                                                                        lowercase(target.word))
                                             : "";
            if (shared.empty())
                shared = base;
            n.affordance = Affordance::free_text;
            n.verification = exact({shared});
            break;
        }
        case ActionBase::sort_in_out:
            n.affordance = Affordance::free_text;
            n.verification = membership(fam);
            break;
        case ActionBase::verify_morphemes: {
            string affix = !target.suffixes.empty()   ? strip_connector(target.suffixes.front())
                           : !target.prefixes.empty() ? strip_connector(target.prefixes.front())
                                                      : base;
            string example = target.word;
            for (const auto &r : target.related_words)
                if (r != target.word && r.find(affix) != string::npos) {
                    example = r;
                    break;
                }
            vector<string> opts{affix, affix + affix.substr(affix.size() - 1)};
            if (affix.size() > 1)
                opts.push_back(affix.substr(0, affix.size() - 1));
            n.affordance = Affordance::multiple_choice;
            n.options = sorted(opts);
            n.verification = exact({affix});
            values["affix"] = affix;
            values["affix_example"] = example;
            values["affix_options"] = join(n.options, " / ");
            break;
        }
        case ActionBase::compare_cousins:
            n.affordance = Affordance::free_text;
            n.verification = membership(cousins(target, base));
            break;
        case ActionBase::contrast_lookalikes:
            n.affordance = Affordance::multiple_choice;
            n.options = {"no", "yes"};
            n.verification = exact({"no"});
            break;
        case ActionBase::map_phonemes:
            n.affordance = Affordance::multiple_choice;
            n.options = sorted(target.graphemes);
            n.verification = exact({focus.target_grapheme});
            break;
        case ActionBase::compare_relatives_sound: {
            vector<string> silent;
            for (size_t i = 0; i < target.graphemes.size(); ++i)
                if (is_silent(target.phonemes[i]))
                    silent.push_back(target.graphemes[i]);
            if (silent.empty())
                silent.push_back(focus.target_grapheme);
            n.affordance = Affordance::free_text;
            n.verification = exact(silent);
            break;
        }
        case ActionBase::sort_by_meaning:
            n.affordance = Affordance::multiple_choice;
            n.options = sorted({target.word, values["homophone"]});
            n.verification = exact({target.word});
            break;
        case ActionBase::visual_contrast:
            n.affordance = Affordance::multiple_choice;
            n.options = sorted({attempt.word, target.word});
            n.verification = exact({target.word});
            wants_reveal = true;
            break;
        }
        n.max_retries = n.affordance == Affordance::multiple_choice || n.affordance == Affordance::speech_text
                            ? 0
                            : retry_bound;
    }
};

} // namespace

ExecutionPlan build_plan(const planner::InquiryTrace &trace, const WordProperties &target,
                         const WordProperties &attempt, const SynthesisKnowledge &knowledge) {
    if (trace.steps.empty())
        throw SynthesisFailure("cannot build a plan for an empty trace", {});
    Builder b(target, attempt, knowledge);
    ExecutionPlan plan;
    plan.word = attempt.word;
    plan.target = target.word;
    plan.rationale = trace.rationale;
    plan.trace = trace.template_ids();
    plan.plan_id = "plan-" + fnv1a_hex(attempt.word + "|" + target.word + "|" + join(plan.trace, ","));
    plan.entry = "h1";

    vector<vector<PlanNode>> per_step;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const auto &t = hypotheses::find_template(knowledge.templates, trace.steps[i].template_id);
        PlanNode prompt;
        prompt.node_id = "h" + std::to_string(i + 1);
        prompt.hypothesis = t.id;
        bool wants_reveal = false;
        b.shape(prompt, t, wants_reveal);
        prompt.instruction_text = fill(t.dialogue.prompt, b.values);
        prompt.feedback_true = fill(t.dialogue.feedback_true, b.values);
        prompt.feedback_false = fill(t.dialogue.feedback_false, b.values);
        prompt.effect_on_true = hypotheses::to_string(t.effect);
        vector<PlanNode> nodes{prompt};
        if (wants_reveal) {
            PlanNode reveal;
            reveal.node_id = prompt.node_id + "r";
            reveal.hypothesis = t.id;
            reveal.affordance = Affordance::reveal_animation;
            reveal.reveal = b.reveal_payload(reveal.instruction_text);
            nodes.push_back(reveal);
        }
        per_step.push_back(nodes);
    }

    PlanNode end;
    end.node_id = "end";
    end.hypothesis = plan.trace.back();
    end.affordance = Affordance::none;
    end.instruction_text = "Back to your writing: \"" + target.word + "\" is the spelling you need.";

    for (size_t i = 0; i < per_step.size(); ++i) {
        const string next = i + 1 < per_step.size() ? per_step[i + 1].front().node_id : end.node_id;
        auto &nodes = per_step[i];
        for (size_t j = 0; j < nodes.size(); ++j) {
            const string to = j + 1 < nodes.size() ? nodes[j + 1].node_id : next;
            nodes[j].on_true = to;
            nodes[j].on_false = to;
            plan.nodes[nodes[j].node_id] = nodes[j];
        }
    }
    plan.nodes[end.node_id] = end;
    return plan;
}

json offline_program_synthesis(const json &payload, const SynthesisKnowledge &knowledge) {
    const auto trace = payload.at("trace").get<planner::InquiryTrace>();
    const auto target = payload.at("target").get<WordProperties>();
    const auto attempt = payload.at("attempt").get<WordProperties>();
    return {{"plan", plan_to_json(build_plan(trace, target, attempt, knowledge))}};
}

SynthesisResult regenerate_on_failure(const planner::InquiryTrace &trace, const WordProperties &target,
                                      const WordProperties &attempt, const analysis::DiagnosticFeatures &features,
                                      const providers::ProviderHandle &provider, int max_retries) {
    if (max_retries < 1)
        throw SchemaError("max_retries must be at least 1");
    vector<vector<string>> failures;
    for (int i = 0; i < max_retries; ++i) {
        json payload{{"trace", trace}, {"target", target}, {"attempt", attempt}, {"features", features}};
        if (i > 0)
            payload["previous_violations"] = failures.back();
        auto response = provider.complete({providers::Task::program_synthesis, payload});
        vector<string> problems;
        try {
            auto plan = plan_from_json(response.payload.at("plan"));
            for (const auto &v : validate_program(plan))
                problems.push_back(v.str());
            if (plan.trace != trace.template_ids())
                problems.push_back("TraceMismatch(): plan metadata does not name the trace's templates");
            if (problems.empty())
                return {std::move(plan), i};
        } catch (const ParseError &e) {
            problems.push_back(string("ParseError: ") + e.what());
        }
        failures.push_back(problems);
    }
    throw SynthesisFailure("no valid plan after " + std::to_string(max_retries) + " attempts", failures);
}

ExecutionPlan synthesize_program(const planner::InquiryTrace &trace, const WordProperties &target,
                                 const WordProperties &attempt, const analysis::DiagnosticFeatures &features,
                                 const providers::ProviderHandle &provider) {
    return regenerate_on_failure(trace, target, attempt, features, provider).plan;
}

} // namespace swi::program
