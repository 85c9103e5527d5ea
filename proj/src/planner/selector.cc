#include "selector.h"

#include "../common/errors.h"

#include <cmath>

using namespace std;
using nlohmann::json;

namespace swi::planner {

TraceScore score_trace(const InquiryTrace &trace, const PlannerConfig &config) {
    TraceScore s;
    const size_t n = trace.steps.size();
    if (n == 0)
        return s;
    for (const auto &step : trace.steps)
        s.validity += step.confidence;
    s.validity /= static_cast<double>(n);

    if (n > 1) {
        size_t linked = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
            bool shared = false;
            for (const auto &[ref, _] : trace.steps[i].evidence.items())
                shared = shared || trace.steps[i + 1].evidence.contains(ref);
            linked += shared;
        }
        s.coherence = static_cast<double>(linked) / static_cast<double>(n - 1);
    }

    const int span = config.max_steps - config.min_steps;
    s.clarity = span == 0 ? 1.0 : 1.0 - static_cast<double>(static_cast<int>(n) - config.min_steps) / span;
    s.clarity = clamp(s.clarity, 0.0, 1.0);

    s.total = config.validity_weight * s.validity + config.coherence_weight * s.coherence +
              config.clarity_weight * s.clarity;
    return s;
}

json offline_trace_selection(const json &payload) {
    const PlannerConfig config = planner_config_from_json(payload.at("config"));
    const auto &traces = payload.at("traces");
    if (traces.empty())
        throw ProviderFailure("bad_request", "trace_selection needs at least one trace");

    size_t best = 0;
    TraceScore best_score;
    InquiryTrace best_trace;
    for (size_t i = 0; i < traces.size(); ++i) {
        auto trace = traces[i].get<InquiryTrace>();
        auto score = score_trace(trace, config);
        bool better = i == 0;
        if (!better) {
            if (fabs(score.total - best_score.total) > 1e-9)
                better = score.total > best_score.total;
            else if (trace.steps.size() != best_trace.steps.size())
                better = trace.steps.size() < best_trace.steps.size();
            else
                better = id_sequence_less(trace.template_ids(), best_trace.template_ids());
        }
        if (better) {
            best = i;
            best_score = score;
            best_trace = std::move(trace);
        }
    }
    return {{"index", best},
            {"validity", best_score.validity},
            {"coherence", best_score.coherence},
            {"clarity", best_score.clarity},
            {"total", best_score.total}};
}

Selection select_trace(const vector<InquiryTrace> &candidates, const PlannerConfig &config,
                       const providers::ProviderHandle &provider) {
    if (candidates.empty())
        throw NoLegalTrace("nothing to select from");
    json payload{{"traces", candidates}, {"config", to_json(config)}};
    auto response = provider.complete({providers::Task::trace_selection, payload});
    const auto &p = response.payload;
    const size_t index = p.at("index").get<size_t>();
    if (index >= candidates.size())
        throw SchemaViolation("trace_selection: index " + to_string(index) + " out of range");
    Selection sel;
    sel.index = index;
    sel.trace = candidates[index];
    sel.score = {p.at("validity").get<double>(), p.at("coherence").get<double>(), p.at("clarity").get<double>(),
                 p.at("total").get<double>()};
    return sel;
}

} // namespace swi::planner
