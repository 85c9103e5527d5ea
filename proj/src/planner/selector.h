#pragma once

#include "config.h"
#include "trace.h"

#include "../providers/provider.h"

namespace swi::planner {

TraceScore score_trace(const InquiryTrace &trace, const PlannerConfig &config);

// Offline handler for trace_selection: payload {traces, config}.
nlohmann::json offline_trace_selection(const nlohmann::json &payload);

struct Selection {
    InquiryTrace trace;
    TraceScore score;
    size_t index = 0;
};

Selection select_trace(const std::vector<InquiryTrace> &candidates, const PlannerConfig &config,
                       const providers::ProviderHandle &provider);

} // namespace swi::planner
