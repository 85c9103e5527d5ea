#include "session.h"

#include "../common/errors.h"
#include "../detection/detector.h"
#include "../linguistics/edit_script.h"

#include <algorithm>
#include <cctype>
#include <sstream>

using namespace std;
using nlohmann::json;
using swi::program::Affordance;
using swi::program::PlanNode;
using swi::program::VerificationKind;

namespace swi::runtime {

namespace {

const vector<pair<EventKind, string>> &event_names() {
    static const vector<pair<EventKind, string>> names{
        {EventKind::prompted, "prompted"},           {EventKind::responded, "responded"},
        {EventKind::verified_true, "verified_true"}, {EventKind::verified_false, "verified_false"},
        {EventKind::revealed, "revealed"},           {EventKind::finished, "finished"},
    };
    return names;
}

string lower(string s) {
    for (char &c : s)
        c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
    return s;
}

bool blank(const string &s) {
    return all_of(s.begin(), s.end(), [](unsigned char c) { return isspace(c); });
}

// Lowercase, single spaces, no spaces around word-sum operators, "→" read as "->".
string normalize(const string &raw) {
    string s = lower(raw);
    for (size_t at; (at = s.find("\xe2\x86\x92")) != string::npos;)
        s.replace(at, 3, "->");
    string collapsed;
    for (char c : s) {
        if (isspace(static_cast<unsigned char>(c))) {
            if (!collapsed.empty() && collapsed.back() != ' ')
                collapsed += ' ';
        } else {
            collapsed += c;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ')
        collapsed.pop_back();
    while (!collapsed.empty() && (collapsed.back() == '.' || collapsed.back() == '!'))
        collapsed.pop_back();
    string out;
    for (size_t i = 0; i < collapsed.size(); ++i) {
        const char c = collapsed[i];
        if (c == ' ') {
            const char prev = out.empty() ? '\0' : out.back();
            const char next = i + 1 < collapsed.size() ? collapsed[i + 1] : '\0';
            if (prev == '+' || prev == '=' || prev == '>' || next == '+' || next == '=' || next == '-')
                continue;
        }
        out += c;
    }
    return out;
}

// Items of a free-text list answer: split on commas, "and", and whitespace.
vector<string> items_of(const LearnerResponse &r) {
    if (r.kind == PayloadKind::selection)
        return r.selection;
    vector<string> out;
    string token;
    istringstream in(r.text);
    while (in >> token) {
        string clean;
        for (char c : token)
            if (isalpha(static_cast<unsigned char>(c)) || c == '-' || c == '\'')
                clean += static_cast<char>(tolower(static_cast<unsigned char>(c)));
        if (!clean.empty() && clean != "and")
            out.push_back(clean);
    }
    return out;
}

string answer_text(const LearnerResponse &r) {
    if (r.kind == PayloadKind::selection)
        return r.selection.empty() ? "" : r.selection.front();
    return r.text;
}

// "insstruct has an extra <s> compared with instruct"
string describe_miss(const string &item, const vector<string> &members) {
    string nearest;
    size_t best = SIZE_MAX;
    for (const auto &m : members) {
        size_t d = linguistics::edit_distance(lower(item), lower(m));
        if (d < best) {
            best = d;
            nearest = m;
        }
    }
    if (nearest.empty() || best > max<size_t>(2, nearest.size() / 3))
        return "\"" + item + "\" does not share the base.";
    vector<string> parts;
    for (const auto &op : linguistics::diff_chars(lower(item), lower(nearest)).edits()) {
        if (op.kind == linguistics::EditKind::remove)
            parts.push_back("an extra <" + op.source + ">");
        else if (op.kind == linguistics::EditKind::insert)
            parts.push_back("a missing <" + op.target + ">");
        else
            parts.push_back("<" + op.source + "> where <" + op.target + "> belongs");
    }
    string joined;
    for (size_t i = 0; i < parts.size(); ++i)
        joined += (i == 0 ? "" : i + 1 == parts.size() ? " and " : ", ") + parts[i];
    return "\"" + item + "\" has " + joined + " compared with \"" + nearest + "\".";
}

string fill_item(string text, const string &item) {
    for (size_t at; (at = text.find("{item}")) != string::npos;)
        text.replace(at, 6, item);
    return text;
}

} // namespace

string to_string(EventKind k) {
    for (const auto &[v, n] : event_names())
        if (v == k)
            return n;
    return "prompted";
}

EventKind event_kind_from_string(const string &s) {
    for (const auto &[v, n] : event_names())
        if (n == s)
            return v;
    throw SchemaError("unknown event kind '" + s + "'");
}

LearnerResponse LearnerResponse::acknowledge(string node) {
    LearnerResponse r;
    r.node_id = std::move(node);
    return r;
}

LearnerResponse LearnerResponse::of_text(string node, string text) {
    LearnerResponse r = acknowledge(std::move(node));
    r.kind = PayloadKind::text;
    r.text = std::move(text);
    return r;
}

LearnerResponse LearnerResponse::of_span(string node, size_t start, size_t end) {
    LearnerResponse r = acknowledge(std::move(node));
    r.kind = PayloadKind::span;
    r.span = {start, end};
    return r;
}

LearnerResponse LearnerResponse::of_selection(string node, vector<string> items) {
    LearnerResponse r = acknowledge(std::move(node));
    r.kind = PayloadKind::selection;
    r.selection = std::move(items);
    return r;
}

json LearnerResponse::payload() const {
    switch (kind) {
    case PayloadKind::text:
        return {{"text", text}};
    case PayloadKind::span:
        return {{"span", {span.first, span.second}}};
    case PayloadKind::selection:
        return {{"selection", selection}};
    case PayloadKind::none:
        break;
    }
    return json::object();
}

void to_json(json &j, const LearnerResponse &r) {
    j = r.payload();
    j["node_id"] = r.node_id;
}

void from_json(const json &j, LearnerResponse &r) {
    if (!j.is_object() || !j.contains("node_id") || !j.at("node_id").is_string())
        throw SchemaError("response needs a string 'node_id'");
    r = LearnerResponse::acknowledge(j.at("node_id").get<string>());
    int kinds = 0;
    if (j.contains("text")) {
        if (!j.at("text").is_string())
            throw SchemaError("'text' must be a string");
        r.kind = PayloadKind::text;
        r.text = j.at("text").get<string>();
        ++kinds;
    }
    if (j.contains("span")) {
        const auto &s = j.at("span");
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned())
            throw SchemaError("'span' must be [start, end]");
        r.kind = PayloadKind::span;
        r.span = {s[0].get<size_t>(), s[1].get<size_t>()};
        ++kinds;
    }
    if (j.contains("selection")) {
        const auto &s = j.at("selection");
        if (!s.is_array() || !all_of(s.begin(), s.end(), [](const json &v) { return v.is_string(); }))
            throw SchemaError("'selection' must be a list of strings");
        r.kind = PayloadKind::selection;
        r.selection = s.get<vector<string>>();
        ++kinds;
    }
    if (kinds > 1)
        throw SchemaError("response carries more than one payload");
}

void check_affordance(const PlanNode &node, const LearnerResponse &r, size_t word_length) {
    auto mismatch = [&](const string &what) {
        throw AffordanceMismatch(node.node_id + " (" + program::to_string(node.affordance) + "): " + what);
    };
    switch (node.affordance) {
    case Affordance::speech_text:
    case Affordance::free_text:
        if (r.kind != PayloadKind::text)
            mismatch("expects a text response");
        if (blank(r.text))
            mismatch("empty response");
        break;
    case Affordance::highlight_span:
        if (r.kind != PayloadKind::span)
            mismatch("expects a span");
        if (r.span.first >= r.span.second || r.span.second > word_length)
            mismatch("span outside the word");
        break;
    case Affordance::multiple_choice:
        if (r.kind != PayloadKind::selection || r.selection.size() != 1)
            mismatch("expects exactly one selected option");
        if (find(node.options.begin(), node.options.end(), r.selection.front()) == node.options.end())
            mismatch("'" + r.selection.front() + "' is not an option");
        break;
    case Affordance::drag_sort:
        if (r.kind != PayloadKind::selection || r.selection.empty())
            mismatch("expects a non-empty selection");
        for (const auto &s : r.selection)
            if (find(node.options.begin(), node.options.end(), s) == node.options.end())
                mismatch("'" + s + "' is not an option");
        break;
    case Affordance::reveal_animation:
    case Affordance::none:
        break;
    }
}

bool judged_per_item(const PlanNode &node) {
    return node.verification && node.verification->kind == VerificationKind::set_membership &&
           node.affordance != Affordance::drag_sort;
}

Verdict verify(const PlanNode &node, const LearnerResponse &r, const string &word,
               const providers::ProviderHandle &provider) {
    const auto &v = *node.verification;
    const auto &e = v.expected;
    Verdict out;
    switch (v.kind) {
    case VerificationKind::exact_match: {
        const string got = normalize(answer_text(r));
        for (const auto &value : e.at("values"))
            out.ok = out.ok || normalize(value.get<string>()) == got;
        break;
    }
    case VerificationKind::set_membership: {
        vector<string> members;
        for (const auto &m : e.at("members"))
            members.push_back(lower(m.get<string>()));
        const auto items = items_of(r);
        vector<string> hits, misses;
        for (const auto &item : items)
            (find(members.begin(), members.end(), lower(item)) != members.end() ? hits : misses).push_back(item);
        if (node.affordance == Affordance::drag_sort) {
            set<string> chosen;
            for (const auto &i : items)
                chosen.insert(lower(i));
            out.ok = chosen == set<string>(members.begin(), members.end());
            json missing = json::array();
            for (const auto &m : members)
                if (!chosen.count(m))
                    missing.push_back(m);
            out.detail["missing"] = missing;
        } else {
            out.ok = !hits.empty();
        }
        out.detail["matched"] = hits;
        out.detail["rejected"] = misses;
        if (!misses.empty()) {
            vector<string> notes;
            for (const auto &m : misses)
                notes.push_back(describe_miss(m, members));
            out.detail["notes"] = notes;
        }
        break;
    }
    case VerificationKind::span_equals:
        out.ok = r.span.first == e.at("start").get<size_t>() && r.span.second == e.at("end").get<size_t>();
        break;
    case VerificationKind::span_overlaps_base: {
        const size_t bs = e.at("start").get<size_t>(), be = e.at("end").get<size_t>();
        const size_t lo = max(bs, r.span.first), hi = min(be, r.span.second);
        const size_t overlap = hi > lo ? hi - lo : 0;
        const bool exact = r.span.first == bs && r.span.second == be;
        const string boxed = r.span.second <= word.size() ? word.substr(r.span.first, r.span.second - r.span.first) : "";
        out.ok = overlap > 0;
        // Right region, but its letters are not yet the base's spelling.
        const bool partial = overlap > 0 && (!exact || lower(boxed) != lower(e.at("base").get<string>()));
        out.detail = {{"overlap", overlap}, {"exact", exact}, {"boxed", boxed}, {"partial_evidence", partial}};
        break;
    }
    case VerificationKind::semantic_check: {
        auto response = provider.complete(
            {providers::Task::semantic_check, {{"response", r.text}, {"target", e.at("target")}, {"keywords", e.at("keywords")}}});
        out.ok = response.payload.at("verdict").get<bool>();
        break;
    }
    }
    return out;
}

json offline_semantic_check(const json &payload, const linguistics::Lexicon &lexicon) {
    const string target = payload.at("target").get<string>();
    set<string> keys;
    for (const auto &k : payload.value("keywords", json::array()))
        keys.insert(lower(k.get<string>()));
    if (const auto *entry = lexicon.find(target))
        for (const auto &w : detection::content_words(entry->context_sentence))
            keys.insert(w);
    for (const auto &w : detection::content_words(target))
        keys.insert(w);
    const string response = payload.at("response").get<string>();
    json overlap = json::array();
    for (const auto &w : detection::content_words(response))
        if (keys.count(w))
            overlap.push_back(w);
    // Function-word targets ("there") never survive content_words.
    const string padded = " " + normalize(response) + " ", needle = " " + lower(target) + " ";
    string spaced;
    for (char c : padded)
        spaced += isalpha(static_cast<unsigned char>(c)) || c == '\'' ? c : ' ';
    const bool uses_target = spaced.find(needle) != string::npos;
    return {{"verdict", uses_target || !overlap.empty()}, {"overlap", overlap}, {"uses_target", uses_target}};
}

Session Session::start(program::ExecutionPlan plan, string id) {
    auto violations = program::validate_program(plan);
    if (!violations.empty()) {
        string msg = "plan " + plan.plan_id + " is invalid:";
        for (const auto &v : violations)
            msg += " " + v.str() + ";";
        throw InvalidPlan(msg);
    }
    Session s;
    s.session_id = std::move(id);
    s.program_plan = std::move(plan);
    s.present(s.program_plan.entry);
    return s;
}

const PlanNode &Session::current_node_ref() const {
    if (finished())
        throw WrongNode("session " + session_id + " is finished");
    return program_plan.nodes.at(current_node);
}

void Session::emit(const string &node, EventKind kind, json payload) {
    events.push_back({events.size(), node, kind, std::move(payload)});
}

void Session::present(const string &node) {
    current_node = node;
    const auto &n = program_plan.nodes.at(node);
    json p{{"instruction", n.instruction_text}, {"affordance", program::to_string(n.affordance)}};
    if (!n.options.empty())
        p["options"] = n.options;
    if (!n.reveal.is_null())
        p["reveal"] = n.reveal;
    emit(node, EventKind::prompted, p);
}

void Session::after_false(const PlanNode &node) {
    int &used = retries[node.node_id];
    if (used < node.max_retries) {
        ++used;
        present(node.node_id);
    } else {
        present(*node.on_false);
    }
}

void Session::step(const LearnerResponse &response, const providers::ProviderHandle &provider) {
    if (finished())
        throw WrongNode("session " + session_id + " is finished");
    if (response.node_id != current_node)
        throw WrongNode("response is for '" + response.node_id + "' but the current node is '" + current_node + "'");
    const PlanNode &node = program_plan.nodes.at(current_node);
    check_affordance(node, response, program_plan.word.size());

    if (node.terminal()) {
        emit(node.node_id, EventKind::responded, response.payload());
        emit(node.node_id, EventKind::finished);
        current_node = finished_marker;
        return;
    }
    if (node.affordance == Affordance::reveal_animation) {
        emit(node.node_id, EventKind::responded, response.payload());
        emit(node.node_id, EventKind::revealed, node.reveal);
        present(*node.on_true);
        return;
    }

    Verdict verdict = verify(node, response, program_plan.word, provider); // may throw before anything is recorded
    emit(node.node_id, EventKind::responded, response.payload());
    if (judged_per_item(node)) {
        for (const auto &m : verdict.detail.at("matched"))
            emit(node.node_id, EventKind::verified_true,
                 {{"item", m},
                  {"feedback", fill_item(node.feedback_true, m.get<string>())},
                  {"effect", node.effect_on_true ? json(*node.effect_on_true) : json(nullptr)}});
        const auto &rejected = verdict.detail.at("rejected");
        for (size_t i = 0; i < rejected.size(); ++i)
            emit(node.node_id, EventKind::verified_false,
                 {{"item", rejected[i]}, {"feedback", node.feedback_false + " " + verdict.detail.at("notes")[i].get<string>()}});
        if (verdict.detail.at("matched").empty() && rejected.empty())
            emit(node.node_id, EventKind::verified_false, {{"item", ""}, {"feedback", node.feedback_false}});
        if (verdict.ok) {
            if (node.effect_on_true)
                achieved.insert(*node.effect_on_true);
            present(*node.on_true);
        } else {
            after_false(node);
        }
        return;
    }
    if (verdict.ok) {
        json p{{"feedback", node.feedback_true}, {"detail", verdict.detail}};
        if (node.effect_on_true) {
            achieved.insert(*node.effect_on_true);
            p["effect"] = *node.effect_on_true;
        }
        emit(node.node_id, EventKind::verified_true, p);
        present(*node.on_true);
    } else {
        emit(node.node_id, EventKind::verified_false, {{"feedback", node.feedback_false}, {"detail", verdict.detail}});
        after_false(node);
    }
}

void Session::reject(const string &reason) {
    if (finished())
        throw WrongNode("session " + session_id + " is finished");
    const PlanNode &node = program_plan.nodes.at(current_node);
    if (node.terminal() || !program::needs_verification(node.affordance))
        throw AffordanceMismatch(node.node_id + " takes no answer to reject");
    emit(node.node_id, EventKind::verified_false,
         {{"feedback", node.feedback_false}, {"detail", {{"affordance_mismatch", reason}}}});
    after_false(node);
}

LearnerResponse always_correct(const PlanNode &node, const program::ExecutionPlan &plan) {
    if (!node.verification)
        return LearnerResponse::acknowledge(node.node_id);
    const auto &e = node.verification->expected;
    switch (node.verification->kind) {
    case VerificationKind::exact_match: {
        string v = e.at("values").front().get<string>();
        return node.affordance == Affordance::multiple_choice ? LearnerResponse::of_selection(node.node_id, {v})
                                                              : LearnerResponse::of_text(node.node_id, v);
    }
    case VerificationKind::set_membership: {
        auto members = e.at("members").get<vector<string>>();
        if (node.affordance == Affordance::drag_sort)
            return LearnerResponse::of_selection(node.node_id, members);
        return LearnerResponse::of_text(node.node_id, members.front());
    }
    case VerificationKind::span_equals:
    case VerificationKind::span_overlaps_base:
        return LearnerResponse::of_span(node.node_id, e.at("start").get<size_t>(), e.at("end").get<size_t>());
    case VerificationKind::semantic_check:
        return LearnerResponse::of_text(node.node_id, "I meant " + plan.target + ".");
    }
    return LearnerResponse::acknowledge(node.node_id);
}

LearnerResponse always_wrong(const PlanNode &node, const program::ExecutionPlan &plan) {
    if (!node.verification)
        return LearnerResponse::acknowledge(node.node_id);
    const auto &e = node.verification->expected;
    switch (node.affordance) {
    case Affordance::multiple_choice: {
        const auto values = e.at("values").get<vector<string>>();
        for (const auto &o : node.options)
            if (find(values.begin(), values.end(), o) == values.end())
                return LearnerResponse::of_selection(node.node_id, {o});
        return LearnerResponse::of_selection(node.node_id, {node.options.front()});
    }
    case Affordance::drag_sort: {
        vector<string> wrong;
        const auto members = e.at("members").get<vector<string>>();
        for (const auto &o : node.options)
            if (find(members.begin(), members.end(), o) == members.end())
                wrong.push_back(o);
        return LearnerResponse::of_selection(node.node_id, wrong.empty() ? node.options : wrong);
    }
    case Affordance::highlight_span: {
        const size_t n = plan.word.size();
        const size_t bs = e.value("start", size_t{0}), be = e.value("end", n);
        if (bs > 0)
            return LearnerResponse::of_span(node.node_id, 0, 1);
        if (be < n)
            return LearnerResponse::of_span(node.node_id, n - 1, n);
        return LearnerResponse::of_span(node.node_id, 0, n);
    }
    default:
        return LearnerResponse::of_text(node.node_id, "zzz");
    }
}

LearnerResponse empty_response(const PlanNode &node, const program::ExecutionPlan &) {
    return LearnerResponse::acknowledge(node.node_id);
}

Session run_headless(const program::ExecutionPlan &plan, const Policy &policy,
                     const providers::ProviderHandle &provider, const string &session_id) {
    Session s = Session::start(plan, session_id);
    size_t budget = plan.nodes.size();
    for (const auto &[_, n] : plan.nodes)
        budget += static_cast<size_t>(n.max_retries);
    for (size_t i = 0; !s.finished(); ++i) {
        if (i >= budget)
            throw InvariantViolation("session " + session_id + " did not finish within " + std::to_string(budget) +
                                     " steps");
        const PlanNode &node = s.current_node_ref();
        LearnerResponse r = policy(node, s.plan());
        try {
            s.step(r, provider);
        } catch (const AffordanceMismatch &e) {
            s.reject(e.what());
        }
    }
    return s;
}

json to_json(const SessionEvent &e) {
    return {{"t", e.timestamp}, {"node", e.node_id}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
}

string export_transcript(const Session &session) {
    string out;
    for (const auto &e : session.transcript()) {
        json line = to_json(e);
        line["session"] = session.id();
        out += line.dump() + "\n";
    }
    return out;
}

} // namespace swi::runtime
