#include "support.h"

#include "program/plan.h"
#include "runtime/session.h"
#include "service/service.h"

#include <doctest.h>
#include <regex>

using nlohmann::json;

namespace {

const std::filesystem::path schema_dir = test::data_dir.parent_path() / "schemas";
const std::filesystem::path repo_dir = test::data_dir.parent_path();

json load_schema(const std::string &name) { return json::parse(test::slurp(schema_dir / (name + ".schema.json"))); }

bool type_matches(const json &v, const std::string &t) {
    if (t == "object")
        return v.is_object();
    if (t == "array")
        return v.is_array();
    if (t == "string")
        return v.is_string();
    if (t == "integer")
        return v.is_number_integer();
    if (t == "number")
        return v.is_number();
    if (t == "boolean")
        return v.is_boolean();
    if (t == "null")
        return v.is_null();
    return false;
}

// Checks the keywords the bundled schemas use; returns one message per failure.
void check(const json &v, const json &s, const std::string &at, std::vector<std::string> &out) {
    if (s.contains("type")) {
        std::vector<std::string> types;
        if (s["type"].is_array())
            types = s["type"].get<std::vector<std::string>>();
        else
            types.push_back(s["type"]);
        if (std::none_of(types.begin(), types.end(), [&](const std::string &t) { return type_matches(v, t); })) {
            out.push_back(at + ": wrong type");
            return;
        }
    }
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
        out.push_back(at + ": " + v.dump() + " not in enum");
    if (v.is_string()) {
        const auto str = v.get<std::string>();
        if (s.contains("minLength") && str.size() < s["minLength"].get<std::size_t>())
            out.push_back(at + ": too short");
        if (s.contains("pattern") && !std::regex_search(str, std::regex(s["pattern"].get<std::string>())))
            out.push_back(at + ": '" + str + "' does not match pattern");
    }
    if (v.is_number()) {
        if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
            out.push_back(at + ": below minimum");
        if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>())
            out.push_back(at + ": above maximum");
    }
    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
            out.push_back(at + ": too few items");
        if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
            out.push_back(at + ": too many items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i)
                check(v[i], s["items"], at + "/" + std::to_string(i), out);
    }
    if (v.is_object()) {
        for (const auto &r : s.value("required", json::array()))
            if (!v.contains(r.get<std::string>()))
                out.push_back(at + ": missing " + r.get<std::string>());
        const json props = s.value("properties", json::object());
        for (const auto &[k, child] : v.items()) {
            if (props.contains(k))
                check(child, props[k], at + "/" + k, out);
            else if (s.contains("additionalProperties")) {
                const auto &extra = s["additionalProperties"];
                if (extra.is_boolean() && !extra.get<bool>())
                    out.push_back(at + ": unexpected " + k);
                else if (extra.is_object())
                    check(child, extra, at + "/" + k, out);
            }
        }
    }
}

// Empty when `v` conforms; otherwise the failures joined by "; ".
std::string violations(const json &v, const json &schema) {
    std::vector<std::string> out;
    check(v, schema, "", out);
    std::string joined;
    for (const auto &m : out)
        joined += (joined.empty() ? "" : "; ") + m;
    return joined;
}

std::vector<json> json_lines(const std::filesystem::path &p) {
    std::vector<json> out;
    std::istringstream in(test::slurp(p));
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#')
            out.push_back(json::parse(line));
    return out;
}

} // namespace

TEST_SUITE("schemas") {
    TEST_CASE("checker rejects what it should") {
        auto schema = load_schema("learner_response");
        CHECK(violations(json{{"node_id", "h1"}}, schema) == "");
        CHECK(violations(json{{"node_id", "h1"}, {"span", {3, 9}}}, schema) == "");
        CHECK_FALSE(violations(json{{"span", {3, 9}}}, schema).empty());
        CHECK_FALSE(violations(json{{"node_id", "h1"}, {"span", {3}}}, schema).empty());
        CHECK_FALSE(violations(json{{"node_id", "h1"}, {"colour", "red"}}, schema).empty());
        CHECK_FALSE(violations(json{{"node_id", 1}}, schema).empty());
    }

    TEST_CASE("every lexicon record matches") {
        auto schema = load_schema("lexicon");
        auto records = json_lines(test::data_dir / "lexicon.jsonl");
        REQUIRE(records.size() == test::resources().lexicon.entries().size());
        for (const auto &r : records) {
            INFO(r.value("word", "?"));
            CHECK(violations(r, schema) == "");
        }
    }

    TEST_CASE("a serialized lexicon record matches") {
        auto v = violations(json(test::entry("reaching")), load_schema("lexicon"));
        CHECK(v == "");
    }

    TEST_CASE("gpc corpus, templates and config files match") {
        const std::vector<std::pair<std::string, std::filesystem::path>> docs{
            {"gpc_corpus", test::data_dir / "gpc_corpus.json"},
            {"templates", test::data_dir / "templates.json"},
            {"config", repo_dir / "config" / "default.json"},
            {"config", repo_dir / "config" / "remote.example.json"},
        };
        for (const auto &[schema, path] : docs) {
            INFO(path.string());
            CHECK(violations(json::parse(test::slurp(path)), load_schema(schema)) == "");
        }
    }

    TEST_CASE("writing samples match") {
        auto schema = load_schema("corpus");
        for (const auto &s : json_lines(test::data_dir / "corpus" / "samples.jsonl")) {
            INFO(s.value("id", "?"));
            CHECK(violations(s, schema) == "");
        }
    }

    TEST_CASE("plans match, golden and generated") {
        auto schema = load_schema("plan");
        CHECK(violations(json::parse(test::slurp(test::fixtures_dir / "golden" / "constractd.plan.json")), schema) == "");
        for (auto [a, t] : {std::pair{"reech", "reach"}, {"runing", "running"}, {"alot", "a lot"}}) {
            INFO(a);
            auto plan = test::analyze_pair(a, t).plan;
            CHECK(violations(json::parse(swi::program::serialize_plan(plan)), schema) == "");
        }
        auto broken = json::parse(test::slurp(test::fixtures_dir / "golden" / "constractd.plan.json"));
        broken["nodes"]["h3"]["affordance"] = "dance";
        broken["nodes"]["h2"]["max_retries"] = -1;
        auto v = violations(broken, schema);
        CHECK(v.find("/nodes/h3/affordance") != std::string::npos);
        CHECK(v.find("/nodes/h2/max_retries") != std::string::npos);
    }

    TEST_CASE("transcript events and session views match") {
        auto event = load_schema("transcript");
        for (const auto &e : json_lines(test::fixtures_dir / "golden" / "constractd.transcript.jsonl"))
            CHECK(violations(e, event) == "");

        auto view = load_schema("session");
        auto plan = test::analyze_pair("reech", "reach").plan;
        auto s = swi::runtime::Session::start(plan, "schema");
        CHECK(violations(swi::service::session_view(s), view) == "");
        auto wrong = swi::runtime::run_headless(plan, swi::runtime::always_wrong, test::offline());
        CHECK(violations(swi::service::session_view(wrong), view) == "");
        for (const auto &e : wrong.transcript())
            CHECK(violations(swi::runtime::to_json(e), event) == "");
    }
}
