#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace swi::program {

enum class Affordance { speech_text, free_text, highlight_span, drag_sort, multiple_choice, reveal_animation, none };
enum class VerificationKind { exact_match, set_membership, span_equals, span_overlaps_base, semantic_check };

std::string to_string(Affordance a);
std::optional<Affordance> affordance_from_string(const std::string &s);
std::string to_string(VerificationKind k);
std::optional<VerificationKind> verification_kind_from_string(const std::string &s);

// True when the affordance collects an answer that must be checked.
bool needs_verification(Affordance a);

// `expected` by kind:
//   exact_match        {"values": [string, ...]}
//   set_membership     {"members": [string, ...]}
//   span_equals        {"start": n, "end": n}
//   span_overlaps_base {"base": string, "start": n, "end": n}
//   semantic_check     {"target": string, "keywords": [string, ...]}
struct VerificationCondition {
    VerificationKind kind = VerificationKind::exact_match;
    nlohmann::json expected = nlohmann::json::object();
    bool provider_required = false;

    bool operator==(const VerificationCondition &) const = default;
};

struct PlanNode {
    std::string node_id;
    std::string hypothesis;
    std::string instruction_text;
    Affordance affordance = Affordance::none;
    std::vector<std::string> options;             // multiple_choice / drag_sort items
    nlohmann::json reveal = nullptr;              // reveal_animation payload
    std::optional<VerificationCondition> verification;
    std::optional<std::string> on_true;
    std::optional<std::string> on_false;
    std::string feedback_true;
    std::string feedback_false;
    std::optional<std::string> effect_on_true;
    // Times a wrong answer re-presents this node before on_false is taken.
    int max_retries = 0;

    bool terminal() const { return !on_true && !on_false; }
    bool operator==(const PlanNode &) const = default;
};

struct ExecutionPlan {
    std::string plan_id;
    std::string word;   // the learner's spelling; spans index into it
    std::string target;
    std::map<std::string, PlanNode> nodes;
    std::string entry;
    std::string rationale;
    std::vector<std::string> trace; // template ids in step order

    bool operator==(const ExecutionPlan &) const = default;
};

inline constexpr int retry_bound = 1;

struct Violation {
    std::string code; // DanglingEdge, CycleDetected, Unreachable, ...
    std::string node;
    std::string detail;

    bool operator==(const Violation &) const = default;
    std::string str() const;
};

std::vector<Violation> validate_program(const ExecutionPlan &plan);

// Canonical text: sorted keys, compact separators, shortest round-trip numbers.
std::string serialize_plan(const ExecutionPlan &plan);
nlohmann::json plan_to_json(const ExecutionPlan &plan);
// Throws ParseError with a JSON-pointer location.
ExecutionPlan parse_plan(const std::string &document);
ExecutionPlan plan_from_json(const nlohmann::json &doc);

} // namespace swi::program
