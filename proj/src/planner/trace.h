#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace swi::planner {

struct InquiryStep {
    std::string template_id;
    double confidence = 0.0;
    nlohmann::json evidence = nlohmann::json::object(); // ref -> bound value
    nlohmann::json warrant = nlohmann::json::object();  // slot -> bound value

    bool operator==(const InquiryStep &) const = default;
};

struct InquiryTrace {
    std::vector<InquiryStep> steps;
    std::string rationale;
    std::vector<std::string> achieved_effects; // in order of achievement

    std::vector<std::string> template_ids() const;
    bool operator==(const InquiryTrace &) const = default;
};

struct TraceScore {
    double validity = 0.0;
    double coherence = 0.0;
    double clarity = 0.0;
    double total = 0.0;

    bool operator==(const TraceScore &) const = default;
};

// Numeric order of template ids: H3 < H10.
bool id_sequence_less(const std::vector<std::string> &a, const std::vector<std::string> &b);

void to_json(nlohmann::json &j, const InquiryStep &s);
void from_json(const nlohmann::json &j, InquiryStep &s);
void to_json(nlohmann::json &j, const InquiryTrace &t);
void from_json(const nlohmann::json &j, InquiryTrace &t);
void to_json(nlohmann::json &j, const TraceScore &s);

} // namespace swi::planner
