#include "common/errors.h"
#include "doctest.h"
#include "httplib.h"
#include "program/plan.h"
#include "runtime/session.h"
#include "providers/remote.h"
#include "service/batch.h"
#include "service/config.h"
#include "service/service.h"
#include "support.h"

#include <thread>
#include <unistd.h>

using namespace swi;
using namespace swi::service;
using nlohmann::json;

namespace {

ServiceConfig test_config() {
    ServiceConfig c;
    c.data_dir = test::data_dir;
    c.port = 0;
    c.threads = 2;
    c.max_body_bytes = 4096;
    return c;
}

Service &shared_service() {
    static Service s(test_config());
    return s;
}

std::string golden_plan() { return test::slurp(test::fixtures_dir / "golden" / "constractd.plan.json"); }

std::string new_session(Service &svc) {
    auto r = svc.create_session(json{{"plan", json::parse(golden_plan())}}.dump());
    REQUIRE(r.status == 201);
    return r.body["session_id"];
}

std::filesystem::path scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("swi-svc-" + std::to_string(::getpid())) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("service") {

TEST_CASE("check") {
    auto &svc = shared_service();
    auto r = svc.check("I like how the art of constractd.");
    CHECK(r.status == 200);
    REQUIRE(r.body["contexts"].size() == 1);
    CHECK(r.body["contexts"][0]["attempt"] == "constractd");
    CHECK(svc.check("The cat sat.").body["contexts"].empty());
    CHECK(svc.check("").status == 400);
    CHECK(svc.check(R"({"document":"She was reeching for the book."})", "application/json").body["contexts"].size() ==
          1);
    CHECK(svc.check("{bad json", "application/json").status == 400);
}

TEST_CASE("inquiry") {
    auto &svc = shared_service();
    auto r = svc.inquiry(R"({"attempt":"reeching","target":"reaching","sentence":"She was reeching for the jar."})");
    REQUIRE(r.status == 200);
    auto plan = program::plan_from_json(r.body);
    CHECK(program::validate_program(plan).empty());
    auto first = plan.nodes.at(plan.entry).hypothesis;
    CHECK((first == "H1" || first == "H8"));
    CHECK(svc.get_plan(plan.plan_id).status == 200);
    CHECK(svc.get_plan("plan-nope").status == 404);

    CHECK(svc.inquiry(R"({"attempt":"reach","target":"reach"})").status == 422);
    auto unknown = svc.inquiry(R"({"attempt":"zzqx","target":"zzqy"})");
    CHECK(unknown.status == 502);
    CHECK(unknown.body["error"] == "unknown_word");
    CHECK(svc.inquiry("").status == 400);
    CHECK(svc.inquiry("[1,2]").status == 400);
}

TEST_CASE("session lifecycle follows the scenario") {
    auto &svc = shared_service();
    auto id = new_session(svc);
    auto view = svc.get_session(id).body;
    CHECK(view["current"] == "h1");
    CHECK(view["node"]["affordance"] == "speech_text");

    auto r = svc.step(id, R"({"node_id":"h1","text":"The builder constructed the building."})");
    CHECK(r.status == 200);
    CHECK(r.body["current"] == "h2");
    r = svc.step(id, R"({"node_id":"h2","span":[3,9]})");
    CHECK(r.body["current"] == "h3");
    r = svc.step(id, R"({"node_id":"h3","selection":["u"]})");
    CHECK(r.body["current"] == "h3r");
    CHECK(r.body["node"]["reveal"]["changes"].size() == 2);
    r = svc.step(id, R"({"node_id":"h3r"})");
    r = svc.step(id, R"({"node_id":"h4","text":"structure, insstruct"})");
    CHECK(r.body["current"] == "end");
    r = svc.step(id, R"({"node_id":"end"})");
    CHECK(r.body["finished"] == true);
    CHECK(r.body["current"] == runtime::finished_marker);

    CHECK(svc.step(id, R"({"node_id":"end"})").status == 409);
}

TEST_CASE("session errors") {
    auto &svc = shared_service();
    auto id = new_session(svc);
    CHECK(svc.step("s-missing", R"({"node_id":"h1","text":"x"})").status == 404);
    CHECK(svc.get_session("s-missing").status == 404);
    CHECK(svc.step(id, R"({"node_id":"h3","selection":["u"]})").status == 409);
    CHECK(svc.step(id, R"({"node_id":"h1","span":[0,2]})").status == 400);
    CHECK(svc.step(id, R"({"node_id":"h1","span":"wide"})").status == 400);
    CHECK(svc.step(id, "not json").status == 400);
    CHECK(svc.get_session(id).body["transcript"].size() == 1);

    CHECK(svc.create_session(R"({"plan_id":"plan-nope"})").status == 404);
    CHECK(svc.create_session(R"({})").status == 400);
    auto broken = json::parse(golden_plan());
    broken["nodes"]["h2"]["on_true"] = "h9";
    CHECK(svc.create_session(json{{"plan", broken}}.dump()).status == 422);
    broken = json::parse(golden_plan());
    broken["nodes"]["h2"]["affordance"] = "hologram";
    CHECK(svc.create_session(json{{"plan", broken}}.dump()).status == 400);
}

TEST_CASE("provider failures map to 502") {
    ServiceConfig cfg = test_config();
    auto res = std::make_unique<pipeline::Resources>(pipeline::load_resources(test::data_dir));
    providers::EndpointConfig dead;
    dead.credential_env = "SWI_TEST_UNSET_KEY";
    dead.base_url = "http://127.0.0.1:1";
    dead.retry_budget = 1;
    Service svc(cfg, std::move(res), providers::make_remote_handle(dead));
    CHECK(svc.check("I like how the art of constractd.").status == 502);
    CHECK(svc.inquiry(R"({"attempt":"reech","target":"reach"})").status == 502);
    CHECK(svc.health().body["backend"] == "remote");
}

TEST_CASE("HTTP interface") {
    Service svc(test_config());
    int port = svc.bind();
    std::thread t([&] { svc.serve(); });
    httplib::Client cli("127.0.0.1", port);
    cli.set_read_timeout(30, 0);

    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    auto check = cli.Post("/check", "I like how the art of constractd.", "text/plain");
    REQUIRE(check);
    CHECK(check->status == 200);

    auto big = cli.Post("/check", std::string(10000, 'a'), "text/plain");
    REQUIRE(big);
    CHECK(big->status == 413);

    auto inq = cli.Post("/inquiry", R"({"attempt":"constractd","target":"constructed"})", "application/json");
    REQUIRE(inq);
    REQUIRE(inq->status == 200);
    auto plan_id = json::parse(inq->body)["plan_id"].get<std::string>();
    CHECK(cli.Get("/plan/" + plan_id)->status == 200);

    auto created = cli.Post("/session", json{{"plan_id", plan_id}}.dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    auto sid = json::parse(created->body)["session_id"].get<std::string>();
    auto stepped = cli.Post("/session/" + sid + "/step", R"({"node_id":"h1","text":"We constructed a fort."})",
                            "application/json");
    REQUIRE(stepped);
    CHECK(stepped->status == 200);
    CHECK(json::parse(stepped->body)["current"] == "h2");
    CHECK(cli.Post("/session/" + sid + "/step", R"({"node_id":"h4","text":"x"})", "application/json")->status == 409);
    CHECK(cli.Get("/session/" + sid)->status == 200);
    CHECK(cli.Get("/session/nope")->status == 404);
    CHECK(cli.Options("/session")->status == 204);

    svc.stop();
    t.join();
}

TEST_CASE("config parsing") {
    auto dir = scratch_dir("config");
    std::filesystem::copy(test::data_dir, dir / "data", std::filesystem::copy_options::recursive);
    std::ofstream(dir / "swi.json") << R"({"port": 0, "data_dir": "data", "planner": {"epsilon": 0.2},
        "provider": {"backend": "offline"}})";
    auto cfg = load_service_config(dir / "swi.json");
    CHECK(cfg.data_dir == dir / "data");
    CHECK(cfg.planner.epsilon == doctest::Approx(0.2));
    CHECK_NOTHROW(validate(cfg));

    CHECK_THROWS_AS(service_config_from_json({{"colour", "red"}}), ConfigError);
    CHECK_THROWS_AS(service_config_from_json({{"port", "eighty"}}), ConfigError);
    CHECK_THROWS_AS(validate(service_config_from_json({{"port", 70000}})), ConfigError);
    CHECK_THROWS_AS(service_config_from_json({{"provider", {{"backend", "psychic"}}}}), ConfigError);
    CHECK_THROWS_AS(service_config_from_json({{"provider", {{"backend", "remote"}}}}), ConfigError);
    CHECK_THROWS_AS(validate(service_config_from_json({{"data_dir", "/nonexistent"}})), ConfigError);
    CHECK_THROWS_AS(load_service_config(dir / "missing.json"), ConfigError);
    auto remote = service_config_from_json(
        {{"provider", {{"backend", "remote"}, {"base_url", "http://x"}, {"credential_env", "KEY"}, {"retry_budget", 5}}}},
        test::data_dir.parent_path());
    CHECK(remote.provider.backend == providers::BackendKind::remote);
    CHECK(remote.provider.endpoint.retry_budget == 5);
    CHECK(remote.provider.endpoint.credential_env == "KEY");
}

TEST_CASE("lru store evicts the least recently used") {
    LruStore<int> store(2);
    store.put("a", std::make_shared<int>(1));
    store.put("b", std::make_shared<int>(2));
    CHECK(store.get("a"));
    store.put("c", std::make_shared<int>(3));
    CHECK(store.get("a"));
    CHECK_FALSE(store.get("b"));
    CHECK(store.size() == 2);
}

TEST_CASE("corpus loading") {
    auto corpus = load_corpus(test::data_dir / "corpus" / "samples.jsonl");
    CHECK(corpus.size() == 10);
    std::size_t marked = 0;
    for (const auto &s : corpus)
        marked += s.misspellings.size();
    CHECK(marked == 25);
    CHECK(corpus_from_jsonl("").empty());
    CHECK_THROWS_AS(corpus_from_jsonl(R"({"id":"x","text":"abc","misspellings":[{"attempt":"zz","target":"a","start":0,"end":2}]})"),
                    SchemaError);
    CHECK_THROWS_AS(policy_by_name("sometimes-right"), ConfigError);
}

TEST_CASE("batch: empty corpus and unmarked rows") {
    const auto &r = test::resources();
    auto empty = batch_evaluate({}, policy_by_name("always-correct"), "always-correct", r, test::offline());
    CHECK(empty.transcripts == 0);
    CHECK(empty.failures.empty());

    auto corpus = corpus_from_jsonl(R"({"id":"clean","text":"The cat sat.","misspellings":[]})");
    auto res = batch_evaluate(corpus, policy_by_name("always-correct"), "always-correct", r, test::offline());
    CHECK(res.transcripts == 0);
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("clean") != std::string::npos);
}

TEST_CASE("batch writes transcripts, plans and a summary") {
    auto out = scratch_dir("batch");
    auto corpus = load_corpus(test::data_dir / "corpus" / "samples.jsonl");
    corpus.resize(2);
    auto res = batch_evaluate(corpus, policy_by_name("always-wrong"), "always-wrong", test::resources(),
                              test::offline(), out);
    CHECK(res.failures.empty());
    CHECK(res.transcripts == 3);
    std::size_t files = 0;
    for (const auto &e : std::filesystem::directory_iterator(out / "transcripts"))
        files += e.path().extension() == ".jsonl";
    CHECK(files == 3);
    auto summary = json::parse(test::slurp(out / "summary.json"));
    CHECK(summary["per_conversation"].size() == 3);
    for (const auto &c : summary["per_conversation"]) {
        CHECK(c["finished"] == true);
        CHECK(c["within_bounds"] == true);
        for (const auto &s : c["steps"]) {
            CHECK(s.contains("question_type"));
            CHECK(s.contains("hypothesis"));
            CHECK(s.contains("rationale"));
        }
    }
}

}
