#include "common/errors.h"
#include "doctest.h"
#include "httplib.h"
#include "program/plan.h"
#include "providers/cassette.h"
#include "providers/offline.h"
#include "providers/remote.h"
#include "runtime/session.h"
#include "support.h"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <unistd.h>

using namespace swi;
using namespace swi::providers;

namespace {

// Fails the first `failures` posts, then answers with `reply`.
class ScriptedTransport : public Transport {
public:
    ScriptedTransport(int failures, json reply) : failures(failures), reply(std::move(reply)) {}
    TransportResult post(const std::string &path, const std::string &body,
                         const std::map<std::string, std::string> &h, std::chrono::milliseconds) override {
        last_path = path;
        last_body = body;
        headers = h;
        if (calls++ < failures)
            return calls % 2 ? TransportResult{0, "", "connection refused"} : TransportResult{503, "busy", ""};
        return {200, reply.dump(), ""};
    }
    int failures;
    json reply;
    std::atomic<int> calls{0};
    std::string last_path, last_body;
    std::map<std::string, std::string> headers;
};

json semantic_reply(bool verdict) { return {{"payload", {{"verdict", verdict}}}}; }

EndpointConfig endpoint() {
    EndpointConfig cfg;
    cfg.credential_env = "SWI_TEST_UNSET_KEY";
    return cfg;
}

ProviderRequest semantic_request() {
    return {Task::semantic_check, {{"response", "The builder constructed it."}, {"target", "constructed"}}};
}

std::filesystem::path temp_file(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("swi-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("providers") {

TEST_CASE("offline property synthesis answers from the lexicon") {
    auto r = test::offline().complete(
        {Task::property_synthesis, {{"word", "reaching"}, {"context_sentence", "She was reaching for the book."}}});
    CHECK(r.payload["graphemes"] == json({"r", "ea", "ch", "i", "ng"}));
    CHECK(r.payload["etymology"]["root"] == "reccan");
    CHECK(r.retries == 0);
}

TEST_CASE("offline unknown word becomes a provider failure") {
    try {
        test::offline().complete({Task::property_synthesis, {{"word", "qqqz"}, {"context_sentence", ""}}});
        FAIL("expected ProviderFailure");
    } catch (const ProviderFailure &e) {
        CHECK(e.reason == "unknown_word");
        CHECK(e.detail == "qqqz");
    }
}

TEST_CASE("offline backend without a handler") {
    auto backend = std::make_shared<OfflineBackend>();
    ProviderHandle h(BackendKind::offline, backend);
    CHECK_THROWS_AS(h.complete(semantic_request()), ProviderFailure);
    backend->register_handler(Task::semantic_check, [](const json &) { return json{{"verdict", "yes"}}; });
    CHECK_THROWS_AS(h.complete(semantic_request()), SchemaViolation);
}

TEST_CASE("response schemas") {
    CHECK_NOTHROW(validate_response(Task::semantic_check, {{"verdict", true}}));
    CHECK_THROWS_AS(validate_response(Task::semantic_check, {{"verdict", 1}}), SchemaViolation);
    CHECK_THROWS_AS(validate_response(Task::program_synthesis, {{"plan", "x"}}), SchemaViolation);
    CHECK_THROWS_AS(validate_response(Task::trace_selection, json::object()), SchemaViolation);
    for (auto t : {Task::property_synthesis, Task::target_prediction, Task::error_ranking, Task::descriptor_score,
                   Task::trace_generation, Task::trace_selection, Task::program_synthesis, Task::semantic_check})
        CHECK(task_from_string(to_string(t)) == t);
}

TEST_CASE("canonical request encoding sorts keys") {
    ProviderRequest a{Task::semantic_check, json::parse(R"({"b":1,"a":{"y":2,"x":1}})")};
    ProviderRequest b{Task::semantic_check, json::parse(R"({"a":{"x":1,"y":2},"b":1})")};
    CHECK(a.canonical() == b.canonical());
    CHECK(a.canonical().find(' ') == std::string::npos);
}

TEST_CASE("remote: two failures then success") {
    std::vector<std::chrono::milliseconds> waited;
    auto transport = std::make_shared<ScriptedTransport>(2, semantic_reply(true));
    auto cfg = endpoint();
    cfg.base_url = "http://unused";
    cfg.retry_budget = 3;
    cfg.backoff_initial = std::chrono::milliseconds(10);
    auto backend = std::make_shared<RemoteBackend>(cfg, transport,
                                                   [&](std::chrono::milliseconds d) { waited.push_back(d); });
    ProviderHandle h(BackendKind::remote, backend);
    auto r = h.complete(semantic_request());
    CHECK(r.payload["verdict"] == true);
    CHECK(r.retries == 2);
    CHECK(backend->total_retries() == 2);
    CHECK(transport->calls == 3);
    CHECK(waited == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(10),
                                                            std::chrono::milliseconds(20)});
    CHECK(transport->last_path == "/v1/complete");
    auto body = json::parse(transport->last_body);
    CHECK(body["task"] == "semantic_check");
    CHECK(body["payload"]["target"] == "constructed");
}

TEST_CASE("remote: exhausted budget") {
    auto transport = std::make_shared<ScriptedTransport>(100, semantic_reply(true));
    auto cfg = endpoint();
    cfg.retry_budget = 3;
    ProviderHandle h(BackendKind::remote,
                     std::make_shared<RemoteBackend>(cfg, transport, [](std::chrono::milliseconds) {}));
    try {
        h.complete(semantic_request());
        FAIL("expected ProviderFailure");
    } catch (const ProviderFailure &e) {
        CHECK(e.reason == "exhausted");
    }
    CHECK(transport->calls == 3);
}

TEST_CASE("remote: malformed replies are retried") {
    auto transport = std::make_shared<ScriptedTransport>(0, json{{"payload", {{"verdict", "maybe"}}}});
    auto cfg = endpoint();
    cfg.retry_budget = 2;
    ProviderHandle h(BackendKind::remote,
                     std::make_shared<RemoteBackend>(cfg, transport, [](std::chrono::milliseconds) {}));
    CHECK_THROWS_AS(h.complete(semantic_request()), ProviderFailure);
    CHECK(transport->calls == 2);
}

TEST_CASE("remote: credential read from the named variable") {
    ::setenv("SWI_TEST_KEY", "sekret", 1);
    auto transport = std::make_shared<ScriptedTransport>(0, semantic_reply(false));
    auto cfg = endpoint();
    cfg.credential_env = "SWI_TEST_KEY";
    ProviderHandle h(BackendKind::remote, std::make_shared<RemoteBackend>(cfg, transport));
    CHECK(h.complete(semantic_request()).payload["verdict"] == false);
    CHECK(transport->headers["Authorization"] == "Bearer sekret");
    ::unsetenv("SWI_TEST_KEY");
}

TEST_CASE("remote: in-flight requests are bounded") {
    class Slow : public Transport {
    public:
        TransportResult post(const std::string &, const std::string &, const std::map<std::string, std::string> &,
                             std::chrono::milliseconds) override {
            int now = ++active;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            --active;
            return {200, semantic_reply(true).dump(), ""};
        }
        std::atomic<int> active{0}, peak{0};
    };
    auto transport = std::make_shared<Slow>();
    auto cfg = endpoint();
    cfg.max_in_flight = 2;
    ProviderHandle h(BackendKind::remote, std::make_shared<RemoteBackend>(cfg, transport));
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i)
        threads.emplace_back([&] { h.complete(semantic_request()); });
    for (auto &t : threads)
        t.join();
    CHECK(transport->peak <= 2);
    CHECK(transport->peak >= 1);
}

TEST_CASE("remote over real HTTP") {
    httplib::Server server;
    server.Post("/v1/complete", [](const httplib::Request &req, httplib::Response &res) {
        auto body = json::parse(req.body);
        bool ok = body["payload"]["target"] == "constructed";
        res.set_content(semantic_reply(ok).dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    auto cfg = endpoint();
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.timeout = std::chrono::milliseconds(5000);
    auto h = make_remote_handle(cfg);
    CHECK(h.kind() == BackendKind::remote);
    CHECK(h.complete(semantic_request()).payload["verdict"] == true);
    server.stop();
    t.join();

    auto dead = endpoint();
    dead.base_url = "http://127.0.0.1:1";
    dead.retry_budget = 2;
    dead.backoff_initial = std::chrono::milliseconds(1);
    CHECK_THROWS_AS(make_remote_handle(dead).complete(semantic_request()), ProviderFailure);
}

TEST_CASE("cassette replays a recorded synthesis exchange") {
    auto tape = temp_file("synthesis.jsonl");
    auto a = test::analyze_pair("constractd", "constructed");
    json payload{{"trace", a.selection.trace}, {"target", a.target}, {"attempt", a.attempt},
                 {"features", a.diagnosis.features}};
    ProviderRequest req{Task::program_synthesis, payload};

    auto recorder = record_replay(test::offline(), tape, CassetteMode::record);
    auto recorded = recorder.complete(req);
    auto player = record_replay(test::offline(), tape, CassetteMode::replay);
    auto replayed = player.complete(req);
    CHECK(program::serialize_plan(program::plan_from_json(replayed.payload["plan"])) ==
          program::serialize_plan(program::plan_from_json(recorded.payload["plan"])));

    ProviderRequest unseen{Task::semantic_check, {{"response", "never asked"}, {"target", "x"}}};
    CHECK_THROWS_AS(player.complete(unseen), CassetteMiss);
}

TEST_CASE("record then replay a whole session") {
    auto tape = temp_file("session.jsonl");
    detection::AttemptContext ctx;
    ctx.attempt = "constractd";
    ctx.target = "constructed";
    ctx.sentence = "I like how the art of constractd.";
    auto run = [&](const ProviderHandle &h) {
        auto a = pipeline::analyze(ctx, test::resources(), h);
        auto s = runtime::run_headless(a.plan, runtime::always_correct, h);
        return program::serialize_plan(a.plan) + runtime::export_transcript(s);
    };
    auto recorded = run(record_replay(test::offline(), tape, CassetteMode::record));
    auto replayed = run(record_replay(test::offline(), tape, CassetteMode::replay));
    CHECK(recorded == replayed);
    CHECK(recorded == run(test::offline()));
}

}
