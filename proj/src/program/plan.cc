#include "plan.h"

#include "../common/errors.h"
#include "../hypotheses/templates.h"

#include <algorithm>
#include <functional>
#include <set>

using namespace std;
using nlohmann::json;

namespace swi::program {

namespace {

const vector<pair<Affordance, string>> &affordance_names() {
    static const vector<pair<Affordance, string>> names{
        {Affordance::speech_text, "speech_text"},       {Affordance::free_text, "free_text"},
        {Affordance::highlight_span, "highlight_span"}, {Affordance::drag_sort, "drag_sort"},
        {Affordance::multiple_choice, "multiple_choice"}, {Affordance::reveal_animation, "reveal_animation"},
        {Affordance::none, "none"},
    };
    return names;
}

const vector<pair<VerificationKind, string>> &kind_names() {
    static const vector<pair<VerificationKind, string>> names{
        {VerificationKind::exact_match, "exact_match"},
        {VerificationKind::set_membership, "set_membership"},
        {VerificationKind::span_equals, "span_equals"},
        {VerificationKind::span_overlaps_base, "span_overlaps_base"},
        {VerificationKind::semantic_check, "semantic_check"},
    };
    return names;
}

bool string_list(const json &j) {
    return j.is_array() && all_of(j.begin(), j.end(), [](const json &v) { return v.is_string(); });
}

bool count(const json &j, const char *key) {
    return j.contains(key) && j.at(key).is_number_integer() && j.at(key).get<long long>() >= 0;
}

// Empty string when `expected` has the shape `kind` requires.
string payload_problem(VerificationKind kind, const json &expected) {
    if (!expected.is_object())
        return "must be an object";
    set<string> keys;
    switch (kind) {
    case VerificationKind::exact_match:
        if (!expected.contains("values") || !string_list(expected.at("values")))
            return "'values' must be a list of strings";
        keys = {"values"};
        break;
    case VerificationKind::set_membership:
        if (!expected.contains("members") || !string_list(expected.at("members")))
            return "'members' must be a list of strings";
        keys = {"members"};
        break;
    case VerificationKind::span_equals:
        if (!count(expected, "start") || !count(expected, "end"))
            return "'start' and 'end' must be non-negative integers";
        keys = {"start", "end"};
        break;
    case VerificationKind::span_overlaps_base:
        if (!count(expected, "start") || !count(expected, "end"))
            return "'start' and 'end' must be non-negative integers";
        if (!expected.contains("base") || !expected.at("base").is_string())
            return "'base' must be a string";
        keys = {"base", "start", "end"};
        break;
    case VerificationKind::semantic_check:
        if (!expected.contains("target") || !expected.at("target").is_string())
            return "'target' must be a string";
        if (!expected.contains("keywords") || !string_list(expected.at("keywords")))
            return "'keywords' must be a list of strings";
        keys = {"target", "keywords"};
        break;
    }
    for (const auto &[k, _] : expected.items())
        if (!keys.count(k))
            return "unexpected key '" + k + "'";
    return "";
}

json optional_string(const optional<string> &s) { return s ? json(*s) : json(nullptr); }

// Strict field access for the parser; every failure names its location.
struct Reader {
    const json &obj;
    string where;

    void only(initializer_list<const char *> allowed) const {
        if (!obj.is_object())
            throw ParseError(where, "expected an object");
        for (const auto &[k, _] : obj.items())
            if (find_if(allowed.begin(), allowed.end(), [&](const char *a) { return k == a; }) == allowed.end())
                throw ParseError(where + "/" + k, "unknown field");
    }
    const json &at(const char *key) const {
        if (!obj.contains(key))
            throw ParseError(where + "/" + key, "missing field");
        return obj.at(key);
    }
    string str(const char *key) const {
        const json &v = at(key);
        if (!v.is_string())
            throw ParseError(where + "/" + key, "expected a string");
        return v.get<string>();
    }
    optional<string> opt_str(const char *key) const {
        if (!obj.contains(key) || obj.at(key).is_null())
            return nullopt;
        return str(key);
    }
    vector<string> strs(const char *key) const {
        const json &v = at(key);
        if (!string_list(v))
            throw ParseError(where + "/" + key, "expected a list of strings");
        return v.get<vector<string>>();
    }
};

} // namespace

string to_string(Affordance a) {
    for (const auto &[v, n] : affordance_names())
        if (v == a)
            return n;
    return "none";
}

optional<Affordance> affordance_from_string(const string &s) {
    for (const auto &[v, n] : affordance_names())
        if (n == s)
            return v;
    return nullopt;
}

string to_string(VerificationKind k) {
    for (const auto &[v, n] : kind_names())
        if (v == k)
            return n;
    return "exact_match";
}

optional<VerificationKind> verification_kind_from_string(const string &s) {
    for (const auto &[v, n] : kind_names())
        if (n == s)
            return v;
    return nullopt;
}

bool needs_verification(Affordance a) { return a != Affordance::reveal_animation && a != Affordance::none; }

string Violation::str() const {
    string s = code + "(" + node + ")";
    return detail.empty() ? s : s + ": " + detail;
}

vector<Violation> validate_program(const ExecutionPlan &plan) {
    vector<Violation> out;
    auto add = [&](string code, string node, string detail = "") {
        out.push_back({std::move(code), std::move(node), std::move(detail)});
    };
    const auto &nodes = plan.nodes;

    if (!nodes.count(plan.entry))
        add("MissingEntry", plan.entry);
    if (plan.trace.empty())
        add("EmptyTrace", "");

    bool edges_ok = true;
    for (const auto &[id, n] : nodes) {
        if (n.node_id != id)
            add("NodeIdMismatch", id, "node_id is '" + n.node_id + "'");
        for (const auto *edge : {&n.on_true, &n.on_false}) {
            if (*edge && !nodes.count(**edge)) {
                add("DanglingEdge", **edge, "from " + id);
                edges_ok = false;
            }
        }
        if (n.on_true.has_value() != n.on_false.has_value())
            add("HalfEdge", id, "a non-terminal node needs both on_true and on_false");

        const bool verifies = needs_verification(n.affordance);
        if (verifies && !n.verification)
            add("MissingVerification", id);
        if (!verifies && n.verification)
            add("UnexpectedVerification", id);
        if (n.verification) {
            const auto &v = *n.verification;
            if (auto problem = payload_problem(v.kind, v.expected); !problem.empty()) {
                add("ExpectedPayload", id, problem);
            } else {
                if (v.kind == VerificationKind::set_membership && v.expected.at("members").empty())
                    add("EmptyMembership", id);
                if (v.kind == VerificationKind::exact_match && v.expected.at("values").empty())
                    add("EmptyValues", id);
                if (v.kind == VerificationKind::span_equals || v.kind == VerificationKind::span_overlaps_base) {
                    const auto start = v.expected.at("start").get<size_t>(), end = v.expected.at("end").get<size_t>();
                    if (start >= end || end > plan.word.size())
                        add("SpanOutOfRange", id,
                            "[" + std::to_string(start) + "," + std::to_string(end) + ") in a word of length " +
                                std::to_string(plan.word.size()));
                }
                if (v.kind == VerificationKind::exact_match && n.affordance == Affordance::multiple_choice) {
                    for (const auto &value : v.expected.at("values"))
                        if (find(n.options.begin(), n.options.end(), value.get<string>()) == n.options.end())
                            add("AnswerNotOffered", id, value.get<string>());
                }
            }
            if (v.provider_required != (v.kind == VerificationKind::semantic_check))
                add("ProviderFlag", id, "provider_required must be set exactly for semantic_check");
        }
        if ((n.affordance == Affordance::multiple_choice || n.affordance == Affordance::drag_sort) &&
            n.options.size() < 2)
            add("MissingOptions", id);
        if (n.affordance == Affordance::reveal_animation && !n.reveal.is_object())
            add("MissingReveal", id);
        if (verifies && !n.terminal() && n.feedback_false.empty())
            add("MissingFeedback", id);
        if (n.max_retries < 0 || n.max_retries > retry_bound)
            add("RetryBound", id, std::to_string(n.max_retries));
        if (n.effect_on_true) {
            try {
                hypotheses::effect_from_string(*n.effect_on_true);
            } catch (const Error &) {
                add("UnknownEffect", id, *n.effect_on_true);
            }
        }
        if (!plan.trace.empty() && find(plan.trace.begin(), plan.trace.end(), n.hypothesis) == plan.trace.end())
            add("UnknownHypothesis", id, n.hypothesis);
    }

    for (const auto &h : plan.trace) {
        const auto k = count_if(nodes.begin(), nodes.end(), [&](const auto &kv) { return kv.second.hypothesis == h; });
        if (k < 1 || k > 3)
            add("StepNodeCount", h, std::to_string(k) + " nodes");
    }

    if (none_of(nodes.begin(), nodes.end(), [](const auto &kv) { return kv.second.terminal(); }))
        add("NoTerminal", "");

    // Kahn's algorithm over the edges that resolve.
    map<string, int> indegree;
    for (const auto &[id, _] : nodes)
        indegree[id];
    auto successors = [&](const PlanNode &n) {
        vector<string> s;
        for (const auto *edge : {&n.on_true, &n.on_false})
            if (*edge && nodes.count(**edge) && find(s.begin(), s.end(), **edge) == s.end())
                s.push_back(**edge);
        return s;
    };
    for (const auto &[id, n] : nodes)
        for (const auto &s : successors(n))
            ++indegree[s];
    vector<string> ready, order;
    for (const auto &[id, d] : indegree)
        if (d == 0)
            ready.push_back(id);
    while (!ready.empty()) {
        string id = ready.back();
        ready.pop_back();
        order.push_back(id);
        for (const auto &s : successors(nodes.at(id)))
            if (--indegree[s] == 0)
                ready.push_back(s);
    }
    const bool acyclic = order.size() == nodes.size();
    if (!acyclic) {
        string members;
        for (const auto &[id, d] : indegree)
            if (d > 0)
                members += (members.empty() ? "" : ",") + id;
        add("CycleDetected", "", members);
    }

    if (nodes.count(plan.entry)) {
        set<string> seen{plan.entry};
        vector<string> stack{plan.entry};
        while (!stack.empty()) {
            string id = stack.back();
            stack.pop_back();
            for (const auto &s : successors(nodes.at(id)))
                if (seen.insert(s).second)
                    stack.push_back(s);
        }
        for (const auto &[id, _] : nodes)
            if (!seen.count(id))
                add("Unreachable", id);
    }

    if (acyclic && edges_ok) {
        // Reverse topological order: successors are settled first.
        map<string, bool> ends;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto &n = nodes.at(*it);
            ends[*it] = n.terminal() || (n.on_true && n.on_false && ends[*n.on_true] && ends[*n.on_false]);
        }
        for (const auto &[id, n] : nodes)
            if (!n.terminal() && !ends[id])
                add("DeadEnd", id);
    }
    return out;
}

json plan_to_json(const ExecutionPlan &plan) {
    json nodes = json::object();
    for (const auto &[id, n] : plan.nodes) {
        json v = nullptr;
        if (n.verification)
            v = {{"kind", to_string(n.verification->kind)},
                 {"expected", n.verification->expected},
                 {"provider_required", n.verification->provider_required}};
        nodes[id] = {{"node_id", n.node_id},
                     {"hypothesis", n.hypothesis},
                     {"instruction_text", n.instruction_text},
                     {"affordance", to_string(n.affordance)},
                     {"options", n.options},
                     {"reveal", n.reveal},
                     {"verification", v},
                     {"on_true", optional_string(n.on_true)},
                     {"on_false", optional_string(n.on_false)},
                     {"feedback_true", n.feedback_true},
                     {"feedback_false", n.feedback_false},
                     {"effect_on_true", optional_string(n.effect_on_true)},
                     {"max_retries", n.max_retries}};
    }
    return {{"plan_id", plan.plan_id},
            {"word", plan.word},
            {"target", plan.target},
            {"entry", plan.entry},
            {"nodes", nodes},
            {"metadata", {{"rationale", plan.rationale}, {"trace", plan.trace}}}};
}

string serialize_plan(const ExecutionPlan &plan) { return plan_to_json(plan).dump(); }

ExecutionPlan plan_from_json(const json &doc) {
    Reader top{doc, ""};
    top.only({"plan_id", "word", "target", "entry", "nodes", "metadata"});
    ExecutionPlan plan;
    plan.plan_id = top.str("plan_id");
    plan.word = top.str("word");
    plan.target = top.str("target");
    plan.entry = top.str("entry");

    Reader meta{top.at("metadata"), "/metadata"};
    meta.only({"rationale", "trace"});
    plan.rationale = meta.str("rationale");
    plan.trace = meta.strs("trace");

    const json &nodes = top.at("nodes");
    if (!nodes.is_object())
        throw ParseError("/nodes", "expected an object");
    for (const auto &[id, body] : nodes.items()) {
        Reader r{body, "/nodes/" + id};
        r.only({"node_id", "hypothesis", "instruction_text", "affordance", "options", "reveal", "verification",
                "on_true", "on_false", "feedback_true", "feedback_false", "effect_on_true", "max_retries"});
        PlanNode n;
        n.node_id = r.str("node_id");
        n.hypothesis = r.str("hypothesis");
        n.instruction_text = r.str("instruction_text");
        const string affordance = r.str("affordance");
        auto a = affordance_from_string(affordance);
        if (!a)
            throw ParseError(r.where + "/affordance", "unknown affordance '" + affordance + "'");
        n.affordance = *a;
        n.options = body.contains("options") ? r.strs("options") : vector<string>{};
        n.reveal = body.value("reveal", json(nullptr));
        if (!n.reveal.is_null() && !n.reveal.is_object())
            throw ParseError(r.where + "/reveal", "expected an object or null");
        if (body.contains("verification") && !body.at("verification").is_null()) {
            Reader v{body.at("verification"), r.where + "/verification"};
            v.only({"kind", "expected", "provider_required"});
            const string kind = v.str("kind");
            auto k = verification_kind_from_string(kind);
            if (!k)
                throw ParseError(v.where + "/kind", "unknown verification kind '" + kind + "'");
            VerificationCondition cond;
            cond.kind = *k;
            cond.expected = v.at("expected");
            if (auto problem = payload_problem(cond.kind, cond.expected); !problem.empty())
                throw ParseError(v.where + "/expected", problem);
            const json &flag = v.at("provider_required");
            if (!flag.is_boolean())
                throw ParseError(v.where + "/provider_required", "expected a boolean");
            cond.provider_required = flag.get<bool>();
            n.verification = cond;
        }
        n.on_true = r.opt_str("on_true");
        n.on_false = r.opt_str("on_false");
        n.feedback_true = r.str("feedback_true");
        n.feedback_false = r.str("feedback_false");
        n.effect_on_true = r.opt_str("effect_on_true");
        const json &retries = r.at("max_retries");
        if (!retries.is_number_integer())
            throw ParseError(r.where + "/max_retries", "expected an integer");
        n.max_retries = retries.get<int>();
        plan.nodes[id] = std::move(n);
    }
    return plan;
}

ExecutionPlan parse_plan(const string &document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error &e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return plan_from_json(doc);
}

} // namespace swi::program
