#pragma once

#include "../linguistics/lexicon.h"
#include "../program/plan.h"
#include "../providers/provider.h"

#include <functional>
#include <set>

namespace swi::runtime {

enum class EventKind { prompted, responded, verified_true, verified_false, revealed, finished };
std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string &s);

// Timestamps are logical ticks (0, 1, 2, ...) so that replays are identical.
struct SessionEvent {
    std::uint64_t timestamp = 0;
    std::string node_id;
    EventKind kind = EventKind::prompted;
    nlohmann::json payload = nullptr;

    bool operator==(const SessionEvent &) const = default;
};

enum class PayloadKind { none, text, span, selection };

struct LearnerResponse {
    std::string node_id;
    PayloadKind kind = PayloadKind::none;
    std::string text;
    std::pair<std::size_t, std::size_t> span{0, 0};
    std::vector<std::string> selection;

    static LearnerResponse acknowledge(std::string node);
    static LearnerResponse of_text(std::string node, std::string text);
    static LearnerResponse of_span(std::string node, std::size_t start, std::size_t end);
    static LearnerResponse of_selection(std::string node, std::vector<std::string> items);
    nlohmann::json payload() const;
};

void from_json(const nlohmann::json &j, LearnerResponse &r);
void to_json(nlohmann::json &j, const LearnerResponse &r);

inline const std::string finished_marker = "FINISHED";

class Session {
public:
    // Throws InvalidPlan listing the violations.
    static Session start(program::ExecutionPlan plan, std::string session_id = "session");

    // Verifies the response against the current node and follows the
    // branch. Throws WrongNode / AffordanceMismatch / ProviderFailure with
    // the session left unchanged.
    void step(const LearnerResponse &response, const providers::ProviderHandle &provider);
    // Treats the current node as answered wrongly without a usable response
    // (records the reason and applies the retry/pivot rules).
    void reject(const std::string &reason);

    bool finished() const { return current_node == finished_marker; }
    const std::string &current() const { return current_node; }
    const program::PlanNode &current_node_ref() const;
    const program::ExecutionPlan &plan() const { return program_plan; }
    const std::vector<SessionEvent> &transcript() const { return events; }
    const std::set<std::string> &effects() const { return achieved; }
    const std::map<std::string, int> &retry_counts() const { return retries; }
    const std::string &id() const { return session_id; }

private:
    Session() = default;
    void emit(const std::string &node, EventKind kind, nlohmann::json payload = nullptr);
    void present(const std::string &node);
    void after_false(const program::PlanNode &node);

    std::string session_id;
    program::ExecutionPlan program_plan;
    std::string current_node;
    std::vector<SessionEvent> events;
    std::set<std::string> achieved;
    std::map<std::string, int> retries;
};

// Throws AffordanceMismatch when the response cannot answer the node.
void check_affordance(const program::PlanNode &node, const LearnerResponse &response, std::size_t word_length);

struct Verdict {
    bool ok = false;
    nlohmann::json detail = nlohmann::json::object();
};

// `word` is the plan's attempt spelling (span answers index into it).
Verdict verify(const program::PlanNode &node, const LearnerResponse &response, const std::string &word,
               const providers::ProviderHandle &provider);

// A free-text answer listing several words is judged word by word; the node
// counts as answered when at least one word is accepted.
bool judged_per_item(const program::PlanNode &node);

// Offline handler for semantic_check: payload {response, target, keywords};
// true when the response shares a content word with the keywords or with
// the lexicon sentence for the target.
nlohmann::json offline_semantic_check(const nlohmann::json &payload, const linguistics::Lexicon &lexicon);

using Policy = std::function<LearnerResponse(const program::PlanNode &, const program::ExecutionPlan &)>;
LearnerResponse always_correct(const program::PlanNode &node, const program::ExecutionPlan &plan);
LearnerResponse always_wrong(const program::PlanNode &node, const program::ExecutionPlan &plan);
LearnerResponse empty_response(const program::PlanNode &node, const program::ExecutionPlan &plan);

// Drives a session to FINISHED with simulated responses. Affordance
// mismatches are recorded as wrong answers.
Session run_headless(const program::ExecutionPlan &plan, const Policy &policy,
                     const providers::ProviderHandle &provider, const std::string &session_id = "headless");

// One canonical JSON object per line.
std::string export_transcript(const Session &session);
nlohmann::json to_json(const SessionEvent &e);

} // namespace swi::runtime
