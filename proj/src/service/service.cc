#include "service.h"

#include "../common/errors.h"
#include "../detection/detector.h"
#include "../pipeline/pipeline.h"
#include "../providers/cassette.h"
#include "../providers/remote.h"

#include <httplib.h>

#include <iomanip>
#include <iostream>
#include <sstream>

using namespace std;
using nlohmann::json;

namespace swi::service {

namespace {

Reply error_reply(int status, const string &code, const string &detail) {
    return {status, {{"error", code}, {"detail", detail}}};
}

// Maps pipeline and runtime exceptions onto HTTP statuses.
template <typename F> Reply guarded(F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        return error_reply(400, "malformed", e.what());
    } catch (const DuplicateId &e) {
        return error_reply(400, "malformed", e.what());
    } catch (const SchemaError &e) {
        return error_reply(400, "malformed", e.what());
    } catch (const AffordanceMismatch &e) {
        return error_reply(400, "affordance_mismatch", e.what());
    } catch (const ParseError &e) {
        return error_reply(400, "parse_error", e.what());
    } catch (const WrongNode &e) {
        return error_reply(409, "wrong_node", e.what());
    } catch (const NoLegalTrace &e) {
        return error_reply(422, "no_legal_trace", e.what());
    } catch (const InvalidPlan &e) {
        return error_reply(422, "invalid_plan", e.what());
    } catch (const UnknownWord &e) {
        return error_reply(502, "unknown_word", e.what());
    } catch (const ProviderFailure &e) {
        return error_reply(502, "provider_failure", e.what());
    } catch (const SynthesisFailure &e) {
        return error_reply(502, "synthesis_failure", e.what());
    } catch (const InvariantViolation &e) {
        return error_reply(502, "invariant_violation", e.what());
    } catch (const exception &e) {
        return error_reply(500, "internal", e.what());
    }
}

json node_view(const program::PlanNode &n) {
    json v{{"node_id", n.node_id},
           {"hypothesis", n.hypothesis},
           {"instruction_text", n.instruction_text},
           {"affordance", program::to_string(n.affordance)},
           {"options", n.options},
           {"terminal", n.terminal()}};
    if (!n.reveal.is_null())
        v["reveal"] = n.reveal;
    return v;
}

} // namespace

providers::ProviderHandle make_provider(const ProviderConfig &config, const pipeline::Resources &resources) {
    providers::ProviderHandle handle = config.backend == providers::BackendKind::offline
                                           ? pipeline::make_offline_provider(resources)
                                           : providers::make_remote_handle(config.endpoint);
    if (config.cassette)
        handle = providers::record_replay(handle, *config.cassette, config.cassette_mode);
    return handle;
}

json session_view(const runtime::Session &s) {
    json transcript = json::array();
    for (const auto &e : s.transcript())
        transcript.push_back(runtime::to_json(e));
    json v{{"session_id", s.id()},
           {"plan_id", s.plan().plan_id},
           {"current", s.current()},
           {"finished", s.finished()},
           {"node", nullptr},
           {"effects", s.effects()},
           {"transcript", transcript}};
    if (!s.finished())
        v["node"] = node_view(s.current_node_ref());
    return v;
}

Service::Service(ServiceConfig config)
    : cfg(std::move(config)), sessions(cfg.session_capacity), plans(cfg.session_capacity),
      id_rng(random_device{}()) {
    validate(cfg);
    auto paths = pipeline::ResourcePaths::in(cfg.data_dir);
    if (cfg.lexicon)
        paths.lexicon = *cfg.lexicon;
    if (cfg.templates)
        paths.templates = *cfg.templates;
    res = make_unique<pipeline::Resources>(pipeline::load_resources(paths, cfg.planner));
    provider = make_provider(cfg.provider, *res);
}

Service::Service(ServiceConfig config, unique_ptr<pipeline::Resources> resources, providers::ProviderHandle handle)
    : cfg(std::move(config)), res(std::move(resources)), provider(std::move(handle)), sessions(cfg.session_capacity),
      plans(cfg.session_capacity), id_rng(random_device{}()) {}

Service::~Service() { stop(); }

string Service::new_session_id() {
    lock_guard lock(id_mutex);
    ostringstream os;
    os << "s" << hex << setw(16) << setfill('0') << id_rng();
    return os.str();
}

Reply Service::check(const string &body, const string &content_type) {
    return guarded([&]() -> Reply {
        string document = body;
        if (content_type.find("application/json") != string::npos) {
            auto j = json::parse(body);
            if (!j.is_object() || !j.contains("document") || !j.at("document").is_string())
                throw SchemaError("expected {\"document\": string}");
            document = j.at("document").get<string>();
        }
        if (document.empty())
            return error_reply(400, "empty_body", "document text required");
        auto report = detection::detect(document, provider, detection::Trigger::explicit_check);
        return {200, report};
    });
}

Reply Service::inquiry(const string &body) {
    return guarded([&]() -> Reply {
        if (body.empty())
            return error_reply(400, "empty_body", "attempt context required");
        auto context = json::parse(body).get<detection::AttemptContext>();
        if (linguistics::lowercase(context.attempt) == linguistics::lowercase(context.target))
            return error_reply(422, "no_error", "attempt already matches the target");
        auto analysis = pipeline::analyze(context, *res, provider);
        auto violations = program::validate_program(analysis.plan);
        if (!violations.empty())
            return error_reply(500, "invalid_plan", violations.front().str());
        plans.put(analysis.plan.plan_id, make_shared<program::ExecutionPlan>(analysis.plan));
        return {200, program::plan_to_json(analysis.plan)};
    });
}

Reply Service::create_session(const string &body) {
    return guarded([&]() -> Reply {
        auto j = json::parse(body.empty() ? "{}" : body);
        if (!j.is_object())
            throw SchemaError("expected an object with 'plan_id' or 'plan'");
        program::ExecutionPlan plan;
        if (j.contains("plan")) {
            plan = program::plan_from_json(j.at("plan"));
        } else if (j.contains("plan_id") && j.at("plan_id").is_string()) {
            auto stored = plans.get(j.at("plan_id").get<string>());
            if (!stored)
                return error_reply(404, "unknown_plan", j.at("plan_id").get<string>());
            plan = *stored;
        } else {
            throw SchemaError("expected 'plan_id' or 'plan'");
        }
        const string id = new_session_id();
        auto entry = make_shared<SessionEntry>(runtime::Session::start(plan, id));
        json view = session_view(entry->session);
        sessions.put(id, entry);
        return {201, view};
    });
}

Reply Service::step(const string &session_id, const string &body) {
    return guarded([&]() -> Reply {
        auto entry = sessions.get(session_id);
        if (!entry)
            return error_reply(404, "unknown_session", session_id);
        auto response = json::parse(body).get<runtime::LearnerResponse>();
        lock_guard lock(entry->mutex);
        entry->session.step(response, provider);
        return {200, session_view(entry->session)};
    });
}

Reply Service::get_session(const string &session_id) {
    return guarded([&]() -> Reply {
        auto entry = sessions.get(session_id);
        if (!entry)
            return error_reply(404, "unknown_session", session_id);
        lock_guard lock(entry->mutex);
        return {200, session_view(entry->session)};
    });
}

Reply Service::get_plan(const string &plan_id) {
    auto plan = plans.get(plan_id);
    if (!plan)
        return error_reply(404, "unknown_plan", plan_id);
    return {200, program::plan_to_json(*plan)};
}

Reply Service::health() const {
    return {200, {{"status", "ok"}, {"backend", provider.is_offline() ? "offline" : "remote"}}};
}

void Service::mount() {
    http = make_unique<httplib::Server>();
    http->set_payload_max_length(cfg.max_body_bytes);
    const int threads = cfg.threads;
    http->new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<size_t>(threads)); };

    auto send = [](httplib::Response &out, const Reply &r) {
        out.status = r.status;
        out.set_header("Access-Control-Allow-Origin", "*");
        out.set_content(r.body.dump(), "application/json");
    };
    http->Post("/check", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, check(req.body, req.get_header_value("Content-Type")));
    });
    http->Post("/inquiry", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, inquiry(req.body));
    });
    http->Post("/session", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, create_session(req.body));
    });
    http->Post(R"(/session/([^/]+)/step)", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, step(req.matches[1], req.body));
    });
    http->Get(R"(/session/([^/]+))", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, get_session(req.matches[1]));
    });
    http->Get(R"(/plan/([^/]+))", [this, send](const httplib::Request &req, httplib::Response &out) {
        send(out, get_plan(req.matches[1]));
    });
    http->Get("/health", [this, send](const httplib::Request &, httplib::Response &out) { send(out, health()); });
    http->Options(R"(.*)", [](const httplib::Request &, httplib::Response &out) {
        out.set_header("Access-Control-Allow-Origin", "*");
        out.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        out.set_header("Access-Control-Allow-Headers", "Content-Type");
        out.status = 204;
    });
    http->set_error_handler([](const httplib::Request &, httplib::Response &out) {
        if (out.body.empty()) {
            const char *code = out.status == 413 ? "payload_too_large" : out.status == 404 ? "not_found" : "http_error";
            out.set_content(json{{"error", code}, {"detail", httplib::status_message(out.status)}}.dump(),
                            "application/json");
        }
    });
}

int Service::bind() {
    if (!http)
        mount();
    int port = cfg.port;
    if (port == 0) {
        port = http->bind_to_any_port(cfg.host);
    } else if (!http->bind_to_port(cfg.host, port)) {
        port = -1;
    }
    if (port < 0)
        throw ConfigError("cannot bind " + cfg.host + ":" + to_string(cfg.port));
    return port;
}

void Service::serve() {
    if (!http)
        throw ConfigError("serve() before bind()");
    http->listen_after_bind();
}

void Service::stop() {
    if (http)
        http->stop();
}

} // namespace swi::service
