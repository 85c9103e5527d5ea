#pragma once

#include <json.hpp>

#include <filesystem>

namespace swi::planner {

struct PlannerConfig {
    double epsilon = 0.15;
    int min_steps = 2;
    int max_steps = 5;
    int candidate_traces = 3;
    double descriptor_weight = 1.0;
    double max_jaccard = 0.8;
    // Trace score weights (validity, coherence, clarity).
    double validity_weight = 0.5;
    double coherence_weight = 0.3;
    double clarity_weight = 0.2;

    // Throws ConfigError on an inconsistent configuration.
    void validate() const;
    bool operator==(const PlannerConfig &) const = default;
};

// Missing keys keep their defaults; unknown keys are rejected.
PlannerConfig planner_config_from_json(const nlohmann::json &j, PlannerConfig base = {});
nlohmann::json to_json(const PlannerConfig &c);

} // namespace swi::planner
