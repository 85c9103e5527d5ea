#include "generator.h"

#include "../common/errors.h"

#include <algorithm>
#include <future>
#include <iostream>
#include <set>

using namespace std;
using nlohmann::json;
using namespace swi::hypotheses;

namespace swi::planner {

namespace {

struct Search {
    const vector<const HypothesisTemplate *> &pool;
    const analysis::ErrorTaxonomy &taxonomy;
    const vector<analysis::ErrorCategory> &implicated;
    const PlannerConfig &config;
    bool must_open_with_h1;
    vector<vector<string>> found;

    vector<const HypothesisTemplate *> path;

    bool depends_on(const HypothesisTemplate *t, LearningEffect e) const {
        for (const auto &group : t->effect_preconditions)
            if (find(group.begin(), group.end(), e) != group.end())
                return true;
        return false;
    }

    bool can_extend(const HypothesisTemplate *t) const {
        if (path.empty() && must_open_with_h1 && t->id != "H1")
            return false;
        for (const auto *p : path)
            if (p == t)
                return false;
        if (!path.empty() && t->question_type < path.back()->question_type)
            return false;
        for (const auto &group : t->effect_preconditions) {
            bool met = false;
            for (const auto *p : path)
                met = met || find(group.begin(), group.end(), p->effect) != group.end();
            if (!met)
                return false;
        }
        for (const auto *p : path)
            if (p->question_type == t->question_type && !depends_on(t, p->effect))
                return false;
        return true;
    }

    bool closes() const {
        for (auto c : implicated) {
            bool ok = false;
            for (const auto *p : path)
                ok = ok || taxonomy.resolves(c, to_string(p->effect));
            if (!ok)
                return false;
        }
        return true;
    }

    void run() {
        if (static_cast<int>(path.size()) >= config.min_steps && closes()) {
            vector<string> ids;
            for (const auto *p : path)
                ids.push_back(p->id);
            found.push_back(ids);
        }
        if (static_cast<int>(path.size()) == config.max_steps)
            return;
        for (const auto *t : pool) {
            if (!can_extend(t))
                continue;
            path.push_back(t);
            run();
            path.pop_back();
        }
    }
};

vector<analysis::ErrorCategory> categories_from(const json &list) {
    vector<analysis::ErrorCategory> out;
    for (const auto &c : list)
        out.push_back(analysis::category_from_string(c.get<string>()));
    return out;
}

} // namespace

vector<vector<string>> enumerate_sequences(const TemplateLibrary &templates, const analysis::ErrorTaxonomy &taxonomy,
                                           const map<string, double> &confidence,
                                           const vector<analysis::ErrorCategory> &implicated,
                                           const PlannerConfig &config) {
    vector<const HypothesisTemplate *> pool;
    for (const auto &t : templates)
        if (confidence.count(t.id))
            pool.push_back(&t);
    Search s{pool, taxonomy, implicated, config, confidence.count("H1") > 0, {}, {}};
    s.run();
    return s.found;
}

double jaccard(const vector<string> &a, const vector<string> &b) {
    set<string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    size_t inter = 0;
    for (const auto &x : sa)
        inter += sb.count(x);
    const size_t uni = sa.size() + sb.size() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

vector<ScoredSequence> top_k_diverse(const vector<vector<string>> &sequences, const map<string, double> &confidence,
                                     int k, double max_jaccard) {
    vector<ScoredSequence> ranked;
    for (const auto &ids : sequences) {
        double total = 0.0;
        for (const auto &id : ids)
            total += confidence.at(id);
        ranked.push_back({ids, total});
    }
    sort(ranked.begin(), ranked.end(), [](const ScoredSequence &a, const ScoredSequence &b) {
        if (fabs(a.total_confidence - b.total_confidence) > 1e-9)
            return a.total_confidence > b.total_confidence;
        return id_sequence_less(a.ids, b.ids);
    });
    vector<ScoredSequence> kept;
    for (const auto &cand : ranked) {
        if (static_cast<int>(kept.size()) == k)
            break;
        bool diverse = all_of(kept.begin(), kept.end(),
                              [&](const ScoredSequence &s) { return jaccard(s.ids, cand.ids) <= max_jaccard + 1e-12; });
        if (diverse)
            kept.push_back(cand);
    }
    return kept;
}

string describe_trace(const vector<string> &ids, const TemplateLibrary &templates,
                      const analysis::ErrorTaxonomy &taxonomy, const vector<analysis::ErrorCategory> &implicated) {
    string path;
    vector<LearningEffect> effects;
    for (const auto &id : ids) {
        const auto &t = find_template(templates, id);
        path += (path.empty() ? "" : " > ") + t.id + " " + t.name;
        effects.push_back(t.effect);
    }
    string closes;
    for (auto c : implicated) {
        for (auto e : effects) {
            if (taxonomy.resolves(c, to_string(e))) {
                closes += (closes.empty() ? "" : ", ") + analysis::to_string(c) + " via " + to_string(e);
                break;
            }
        }
    }
    return path + (closes.empty() ? "" : "; resolves " + closes);
}

json offline_trace_generation(const json &payload, const TemplateLibrary &templates,
                              const analysis::ErrorTaxonomy &taxonomy) {
    map<string, double> confidence;
    for (const auto &c : payload.at("candidates"))
        confidence[c.at("id").get<string>()] = c.at("confidence").get<double>();
    const auto implicated = categories_from(payload.at("implicated"));
    const PlannerConfig config = planner_config_from_json(payload.at("config"));
    const size_t instance = payload.value("instance", size_t{0});

    const auto sequences = enumerate_sequences(templates, taxonomy, confidence, implicated, config);
    const auto top = top_k_diverse(sequences, confidence, config.candidate_traces, config.max_jaccard);
    json traces = json::array();
    if (instance < top.size())
        traces.push_back({{"steps", top[instance].ids},
                          {"rationale", describe_trace(top[instance].ids, templates, taxonomy, implicated)}});
    return {{"traces", traces}};
}

vector<InquiryTrace> generate_traces(const vector<FilteredHypothesis> &filtered,
                                     const analysis::ErrorDiagnosis &diagnosis, const TemplateLibrary &templates,
                                     const analysis::ErrorTaxonomy &taxonomy, const PlannerConfig &config,
                                     const providers::ProviderHandle &provider) {
    if (filtered.empty())
        throw NoLegalTrace("no hypothesis applies to this attempt");
    config.validate();
    const auto implicated = diagnosis.implicated();

    json candidates = json::array();
    set<string> available;
    for (const auto &h : filtered) {
        candidates.push_back({{"id", h.tmpl->id}, {"confidence", h.confidence}});
        available.insert(h.tmpl->id);
    }
    json implicated_names = json::array();
    for (auto c : implicated)
        implicated_names.push_back(analysis::to_string(c));

    vector<future<providers::ProviderResponse>> pending;
    for (int i = 0; i < config.candidate_traces; ++i) {
        json payload{{"candidates", candidates},
                     {"implicated", implicated_names},
                     {"config", to_json(config)},
                     {"instance", i}};
        pending.push_back(async(launch::async, [&provider, payload] {
            return provider.complete({providers::Task::trace_generation, payload});
        }));
    }
    vector<providers::ProviderResponse> responses;
    for (auto &f : pending)
        responses.push_back(f.get());

    LegalityContext ctx{templates, taxonomy, implicated, available, config};
    vector<InquiryTrace> out;
    set<vector<string>> seen;
    for (const auto &response : responses) {
        for (const auto &t : response.payload.at("traces")) {
            InquiryTrace trace;
            trace.rationale = t.at("rationale").get<string>();
            bool known = true;
            for (const auto &id : t.at("steps")) {
                auto it = find_if(filtered.begin(), filtered.end(),
                                  [&](const FilteredHypothesis &h) { return h.tmpl->id == id.get<string>(); });
                if (it == filtered.end()) {
                    known = false;
                    break;
                }
                InquiryStep step;
                step.template_id = it->tmpl->id;
                step.confidence = it->confidence;
                step.evidence = it->evidence;
                for (const auto &slot : it->tmpl->warrant.params)
                    step.warrant[slot] = it->evidence.at(slot);
                trace.steps.push_back(std::move(step));
                trace.achieved_effects.push_back(to_string(it->tmpl->effect));
            }
            if (!known) {
                clog << "trace generation: dropped a trace naming an unfiltered template\n";
                continue;
            }
            auto violations = check_trace(trace, ctx);
            if (!violations.empty()) {
                clog << "trace generation: dropped illegal trace (" << violations.front() << ")\n";
                continue;
            }
            if (seen.insert(trace.template_ids()).second)
                out.push_back(std::move(trace));
        }
    }
    if (out.empty()) {
        string names;
        for (const auto &h : filtered)
            names += (names.empty() ? "" : ", ") + h.tmpl->id;
        throw NoLegalTrace("no legal trace of " + to_string(config.min_steps) + "-" + to_string(config.max_steps) +
                           " steps closes the diagnosis from {" + names + "}");
    }
    return out;
}

} // namespace swi::planner
