#include "config.h"

#include "../common/errors.h"

#include <cmath>

using namespace std;
using nlohmann::json;

namespace swi::planner {

void PlannerConfig::validate() const {
    if (!(min_steps >= 2 && min_steps <= max_steps && max_steps <= 5))
        throw ConfigError("planner: need 2 <= min_steps <= max_steps <= 5");
    if (candidate_traces < 1)
        throw ConfigError("planner: candidate_traces must be at least 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ConfigError("planner: epsilon must lie in [0,1]");
    if (!(descriptor_weight >= 0.0 && descriptor_weight <= 1.0))
        throw ConfigError("planner: descriptor_weight must lie in [0,1]");
    if (!(max_jaccard >= 0.0 && max_jaccard <= 1.0))
        throw ConfigError("planner: max_jaccard must lie in [0,1]");
    const double total = validity_weight + coherence_weight + clarity_weight;
    if (validity_weight < 0 || coherence_weight < 0 || clarity_weight < 0 || fabs(total - 1.0) > 1e-9)
        throw ConfigError("planner: score weights must be non-negative and sum to 1");
}

PlannerConfig planner_config_from_json(const json &j, PlannerConfig c) {
    if (!j.is_object())
        throw ConfigError("planner config must be an object");
    for (const auto &[key, value] : j.items()) {
        try {
            if (key == "epsilon")
                c.epsilon = value.get<double>();
            else if (key == "min_steps")
                c.min_steps = value.get<int>();
            else if (key == "max_steps")
                c.max_steps = value.get<int>();
            else if (key == "candidate_traces")
                c.candidate_traces = value.get<int>();
            else if (key == "descriptor_weight")
                c.descriptor_weight = value.get<double>();
            else if (key == "max_jaccard")
                c.max_jaccard = value.get<double>();
            else if (key == "validity_weight")
                c.validity_weight = value.get<double>();
            else if (key == "coherence_weight")
                c.coherence_weight = value.get<double>();
            else if (key == "clarity_weight")
                c.clarity_weight = value.get<double>();
            else
                throw ConfigError("planner config: unknown key '" + key + "'");
        } catch (const json::exception &e) {
            throw ConfigError("planner config: bad value for '" + key + "': " + e.what());
        }
    }
    c.validate();
    return c;
}

json to_json(const PlannerConfig &c) {
    return {{"epsilon", c.epsilon},
            {"min_steps", c.min_steps},
            {"max_steps", c.max_steps},
            {"candidate_traces", c.candidate_traces},
            {"descriptor_weight", c.descriptor_weight},
            {"max_jaccard", c.max_jaccard},
            {"validity_weight", c.validity_weight},
            {"coherence_weight", c.coherence_weight},
            {"clarity_weight", c.clarity_weight}};
}

} // namespace swi::planner
