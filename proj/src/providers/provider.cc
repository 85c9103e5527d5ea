#include "provider.h"

#include "../common/errors.h"

using namespace std;

namespace swi::providers {

namespace {
const map<Task, string> &task_names() {
    static const map<Task, string> names{
        {Task::property_synthesis, "property_synthesis"},
        {Task::target_prediction, "target_prediction"},
        {Task::error_ranking, "error_ranking"},
        {Task::descriptor_score, "descriptor_score"},
        {Task::trace_generation, "trace_generation"},
        {Task::trace_selection, "trace_selection"},
        {Task::program_synthesis, "program_synthesis"},
        {Task::semantic_check, "semantic_check"},
    };
    return names;
}

void require(bool ok, Task task, const string &what) {
    if (!ok)
        throw SchemaViolation(to_string(task) + ": " + what);
}

void require_string_list(const json &obj, const char *key, Task task) {
    require(obj.contains(key) && obj.at(key).is_array(), task, string("'") + key + "' must be a list");
    for (const auto &v : obj.at(key))
        require(v.is_string(), task, string("'") + key + "' must contain strings");
}

void require_unit_number(const json &obj, const char *key, Task task) {
    require(obj.contains(key) && obj.at(key).is_number(), task, string("'") + key + "' must be a number");
    double v = obj.at(key).get<double>();
    require(v >= 0.0 && v <= 1.0, task, string("'") + key + "' must lie in [0,1]");
}
} // namespace

string to_string(Task task) {
    return task_names().at(task);
}

Task task_from_string(const string &tag) {
    for (const auto &[task, name] : task_names())
        if (name == tag)
            return task;
    throw SchemaViolation("unknown task tag '" + tag + "'");
}

string ProviderRequest::canonical() const {
    return json{{"task", to_string(task)}, {"payload", payload}}.dump();
}

void validate_response(Task task, const json &p) {
    require(p.is_object(), task, "payload must be an object");
    switch (task) {
    case Task::property_synthesis:
        require(p.contains("word") && p.at("word").is_string(), task, "'word' must be a string");
        require_string_list(p, "morphemes", task);
        require_string_list(p, "graphemes", task);
        require_string_list(p, "phonemes", task);
        break;
    case Task::target_prediction:
        require(p.contains("errors") && p.at("errors").is_array(), task, "'errors' must be a list");
        for (const auto &e : p.at("errors")) {
            require(e.is_object(), task, "error entries must be objects");
            require(e.contains("attempt") && e.at("attempt").is_string(), task, "'attempt' must be a string");
            require(e.contains("target") && e.at("target").is_string(), task, "'target' must be a string");
            require(e.contains("start") && e.at("start").is_number_unsigned(), task, "'start' must be an offset");
            require(e.contains("end") && e.at("end").is_number_unsigned(), task, "'end' must be an offset");
        }
        break;
    case Task::error_ranking:
        require(p.contains("ranking") && p.at("ranking").is_array() && !p.at("ranking").empty(), task,
                "'ranking' must be a non-empty list");
        for (const auto &r : p.at("ranking")) {
            require(r.is_object() && r.contains("category") && r.at("category").is_string(), task,
                    "ranking entries need a 'category'");
            require_unit_number(r, "confidence", task);
        }
        break;
    case Task::descriptor_score:
        require_unit_number(p, "confidence", task);
        break;
    case Task::trace_generation:
        require(p.contains("traces") && p.at("traces").is_array(), task, "'traces' must be a list");
        for (const auto &t : p.at("traces")) {
            require(t.is_object(), task, "trace entries must be objects");
            require_string_list(t, "steps", task);
            require(t.contains("rationale") && t.at("rationale").is_string(), task, "'rationale' must be a string");
        }
        break;
    case Task::trace_selection:
        require(p.contains("index") && p.at("index").is_number_unsigned(), task, "'index' must be a count");
        for (const char *k : {"validity", "coherence", "clarity"})
            require_unit_number(p, k, task);
        require(p.contains("total") && p.at("total").is_number(), task, "'total' must be a number");
        break;
    case Task::program_synthesis:
        require(p.contains("plan") && p.at("plan").is_object(), task, "'plan' must be an object");
        break;
    case Task::semantic_check:
        require(p.contains("verdict") && p.at("verdict").is_boolean(), task, "'verdict' must be a boolean");
        break;
    }
}

ProviderHandle::ProviderHandle(BackendKind kind, shared_ptr<Backend> backend)
    : backend_kind(kind), impl(std::move(backend)) {}

ProviderResponse ProviderHandle::complete(const ProviderRequest &request) const {
    if (!impl)
        throw ProviderFailure("unconfigured", "provider handle has no backend");
    ProviderResponse response = impl->complete(request);
    validate_response(request.task, response.payload);
    response.task = request.task;
    return response;
}

ProviderResponse complete(const ProviderRequest &request, const ProviderHandle &handle) {
    return handle.complete(request);
}

} // namespace swi::providers
