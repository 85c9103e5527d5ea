#include "trace.h"

#include <algorithm>

using namespace std;
using nlohmann::json;

namespace swi::planner {

vector<string> InquiryTrace::template_ids() const {
    vector<string> out;
    for (const auto &s : steps)
        out.push_back(s.template_id);
    return out;
}

bool id_sequence_less(const vector<string> &a, const vector<string> &b) {
    auto number = [](const string &id) { return id.size() > 1 ? stoi(id.substr(1)) : 0; };
    return lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                   [&](const string &x, const string &y) { return number(x) < number(y); });
}

void to_json(json &j, const InquiryStep &s) {
    j = json{{"template", s.template_id}, {"confidence", s.confidence}, {"evidence", s.evidence}, {"warrant", s.warrant}};
}

void from_json(const json &j, InquiryStep &s) {
    s.template_id = j.at("template").get<string>();
    s.confidence = j.value("confidence", 0.0);
    s.evidence = j.value("evidence", json::object());
    s.warrant = j.value("warrant", json::object());
}

void to_json(json &j, const InquiryTrace &t) {
    j = json{{"steps", t.steps}, {"rationale", t.rationale}, {"achieved_effects", t.achieved_effects}};
}

void from_json(const json &j, InquiryTrace &t) {
    t.steps = j.at("steps").get<vector<InquiryStep>>();
    t.rationale = j.value("rationale", "");
    t.achieved_effects = j.value("achieved_effects", vector<string>{});
}

void to_json(json &j, const TraceScore &s) {
    j = json{{"validity", s.validity}, {"coherence", s.coherence}, {"clarity", s.clarity}, {"total", s.total}};
}

} // namespace swi::planner
