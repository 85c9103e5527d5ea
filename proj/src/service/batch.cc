#include "batch.h"

#include "../common/errors.h"
#include "../program/plan.h"

#include <fstream>
#include <set>
#include <sstream>

using namespace std;
using nlohmann::json;
namespace fs = std::filesystem;

namespace swi::service {

vector<WritingSample> corpus_from_jsonl(const string &text) {
    vector<WritingSample> out;
    istringstream in(text);
    string line;
    for (size_t n = 1; getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == string::npos || line[0] == '#')
            continue;
        try {
            auto j = json::parse(line);
            WritingSample s;
            s.id = j.at("id").get<string>();
            s.text = j.at("text").get<string>();
            for (const auto &m : j.value("misspellings", json::array())) {
                MarkedMisspelling mm{m.at("attempt").get<string>(), m.at("target").get<string>(),
                                     m.at("start").get<size_t>(), m.at("end").get<size_t>()};
                if (mm.end > s.text.size() || mm.start >= mm.end ||
                    s.text.substr(mm.start, mm.end - mm.start) != mm.attempt)
                    throw SchemaError("span [" + to_string(mm.start) + "," + to_string(mm.end) +
                                      ") does not hold '" + mm.attempt + "'");
                s.misspellings.push_back(mm);
            }
            out.push_back(std::move(s));
        } catch (const json::exception &e) {
            throw SchemaError("corpus line " + to_string(n) + ": " + e.what());
        } catch (const SchemaError &e) {
            throw SchemaError("corpus line " + to_string(n) + ": " + e.what());
        }
    }
    return out;
}

vector<WritingSample> load_corpus(const fs::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot read corpus " + file.string());
    stringstream buf;
    buf << in.rdbuf();
    return corpus_from_jsonl(buf.str());
}

detection::AttemptContext context_for(const WritingSample &sample, const MarkedMisspelling &m) {
    detection::AttemptContext c;
    c.attempt = m.attempt;
    c.target = m.target;
    c.span = {m.start, m.end};
    c.sentence = detection::sentence_around(sample.text, m.start);
    c.document_excerpt = sample.text;
    return c;
}

runtime::Policy scripted_policy(const json &answers) {
    if (!answers.is_array())
        throw ConfigError("scripted answers must be a list");
    auto next = make_shared<size_t>(0);
    return [answers, next](const program::PlanNode &node, const program::ExecutionPlan &) {
        if (!program::needs_verification(node.affordance) || *next >= answers.size())
            return runtime::LearnerResponse::acknowledge(node.node_id);
        json a = answers[(*next)++];
        a["node_id"] = node.node_id;
        return a.get<runtime::LearnerResponse>();
    };
}

PolicyFactory policy_by_name(const string &name) {
    auto fixed = [](runtime::Policy p) { return [p](const WritingSample &, const MarkedMisspelling &) { return p; }; };
    if (name == "always-correct")
        return fixed(runtime::always_correct);
    if (name == "always-wrong")
        return fixed(runtime::always_wrong);
    if (name == "empty")
        return fixed(runtime::empty_response);
    const string prefix = "scripted:";
    if (name.rfind(prefix, 0) == 0) {
        const fs::path file = name.substr(prefix.size());
        ifstream in(file);
        if (!in)
            throw ConfigError("cannot read script " + file.string());
        json script;
        try {
            script = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ConfigError("script " + file.string() + ": " + e.what());
        }
        if (!script.is_object())
            throw ConfigError("script must map attempts to answer lists");
        return [script](const WritingSample &, const MarkedMisspelling &m) {
            return scripted_policy(script.value(m.attempt, json::array()));
        };
    }
    throw ConfigError("unknown policy '" + name + "' (always-correct, always-wrong, empty, scripted:<file>)");
}

size_t intervention_count(const runtime::Session &session) {
    set<string> steps;
    for (const auto &e : session.transcript())
        if (e.kind == runtime::EventKind::prompted && !session.plan().nodes.at(e.node_id).terminal())
            steps.insert(session.plan().nodes.at(e.node_id).hypothesis);
    return steps.size();
}

namespace {

string file_stem(const string &sample, size_t k, const string &attempt) {
    string clean;
    for (char c : attempt)
        clean += isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return sample + "-" + to_string(k) + "-" + clean;
}

void write_file(const fs::path &p, const string &content) {
    fs::create_directories(p.parent_path());
    ofstream out(p, ios::binary);
    if (!out)
        throw ConfigError("cannot write " + p.string());
    out << content;
}

} // namespace

BatchResult batch_evaluate(const vector<WritingSample> &corpus, const PolicyFactory &policy,
                           const string &policy_name, const pipeline::Resources &resources,
                           const providers::ProviderHandle &provider, const fs::path &out_dir) {
    BatchResult result;
    json conversations = json::array();
    json counts = json::array();
    bool bounded = true;

    for (const auto &sample : corpus) {
        if (sample.misspellings.empty()) {
            result.warnings.push_back("sample " + sample.id + ": no marked misspellings, skipped");
            continue;
        }
        for (size_t k = 0; k < sample.misspellings.size(); ++k) {
            const auto &m = sample.misspellings[k];
            const string stem = file_stem(sample.id, k + 1, m.attempt);
            try {
                auto a = pipeline::analyze(context_for(sample, m), resources, provider);
                auto session = runtime::run_headless(a.plan, policy(sample, m), provider, stem);
                const size_t n = intervention_count(session);
                const bool ok = n >= static_cast<size_t>(resources.config.min_steps) &&
                                n <= static_cast<size_t>(resources.config.max_steps);
                bounded = bounded && ok;

                json steps = json::array();
                for (const auto &step : a.selection.trace.steps) {
                    const auto &t = hypotheses::find_template(resources.templates, step.template_id);
                    steps.push_back({{"hypothesis", t.id},
                                     {"name", t.name},
                                     {"question_type", hypotheses::to_string(t.question_type)},
                                     {"category", analysis::to_string(t.category)},
                                     {"confidence", step.confidence},
                                     {"rationale", t.name + ": " + t.warrant.type + " over " +
                                                       step.warrant.dump() + " toward " +
                                                       hypotheses::to_string(t.effect)}});
                }
                conversations.push_back({{"name", stem},
                                         {"sample", sample.id},
                                         {"attempt", m.attempt},
                                         {"target", m.target},
                                         {"plan_id", a.plan.plan_id},
                                         {"interventions", n},
                                         {"within_bounds", ok},
                                         {"finished", session.finished()},
                                         {"effects", session.effects()},
                                         {"rationale", a.selection.trace.rationale},
                                         {"score", a.selection.score},
                                         {"steps", steps}});
                counts.push_back(n);
                ++result.transcripts;
                if (!out_dir.empty()) {
                    write_file(out_dir / "transcripts" / (stem + ".jsonl"), runtime::export_transcript(session));
                    write_file(out_dir / "plans" / (stem + ".json"), program::serialize_plan(a.plan) + "\n");
                }
            } catch (const Error &e) {
                result.failures.push_back(stem + ": " + e.what());
            }
        }
    }
    json failures = result.failures, warnings = result.warnings;
    result.summary = {{"policy", policy_name},
                      {"samples", corpus.size()},
                      {"conversations", result.transcripts},
                      {"intervention_counts", counts},
                      {"all_within_bounds", bounded},
                      {"failures", failures},
                      {"warnings", warnings},
                      {"per_conversation", conversations}};
    if (!out_dir.empty())
        write_file(out_dir / "summary.json", result.summary.dump(2) + "\n");
    return result;
}

} // namespace swi::service
