#include "config.h"

#include "../common/errors.h"

#include <fstream>
#include <set>

using namespace std;
using nlohmann::json;
namespace fs = std::filesystem;

namespace swi::service {

namespace {

void only(const json &j, const set<string> &keys, const string &where) {
    if (!j.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto &[k, _] : j.items())
        if (!keys.count(k))
            throw ConfigError(where + ": unknown key '" + k + "'");
}

template <typename T> T get(const json &j, const char *key, T fallback, const string &where) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(where + ": bad value for '" + key + "'");
    }
}

fs::path resolve(const fs::path &base, const string &p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

ProviderConfig provider_from_json(const json &j, const fs::path &base) {
    only(j, {"backend", "base_url", "credential_env", "timeout_ms", "retry_budget", "max_in_flight",
             "backoff_initial_ms", "cassette", "cassette_mode"},
         "provider");
    ProviderConfig p;
    const string backend = get<string>(j, "backend", "offline", "provider");
    if (backend == "offline")
        p.backend = providers::BackendKind::offline;
    else if (backend == "remote")
        p.backend = providers::BackendKind::remote;
    else
        throw ConfigError("provider: backend must be 'offline' or 'remote', got '" + backend + "'");
    auto &e = p.endpoint;
    e.base_url = get<string>(j, "base_url", "", "provider");
    e.credential_env = get<string>(j, "credential_env", "", "provider");
    e.timeout = chrono::milliseconds(get<int>(j, "timeout_ms", 30000, "provider"));
    e.retry_budget = get<int>(j, "retry_budget", 3, "provider");
    e.max_in_flight = get<int>(j, "max_in_flight", 4, "provider");
    e.backoff_initial = chrono::milliseconds(get<int>(j, "backoff_initial_ms", 250, "provider"));
    if (j.contains("cassette") && !j.at("cassette").is_null())
        p.cassette = resolve(base, get<string>(j, "cassette", "", "provider"));
    const string mode = get<string>(j, "cassette_mode", "replay", "provider");
    if (mode != "record" && mode != "replay")
        throw ConfigError("provider: cassette_mode must be 'record' or 'replay'");
    p.cassette_mode = mode == "record" ? providers::CassetteMode::record : providers::CassetteMode::replay;
    if (e.retry_budget < 0 || e.max_in_flight < 1 || e.timeout.count() <= 0)
        throw ConfigError("provider: retry_budget >= 0, max_in_flight >= 1 and timeout_ms > 0 required");
    if (p.backend == providers::BackendKind::remote && e.base_url.empty())
        throw ConfigError("provider: remote backend needs base_url");
    return p;
}

} // namespace

ServiceConfig service_config_from_json(const json &j, const fs::path &base) {
    only(j, {"host", "port", "data_dir", "lexicon", "templates", "planner", "provider", "session_capacity",
             "max_body_bytes", "threads"},
         "config");
    ServiceConfig c;
    c.host = get<string>(j, "host", c.host, "config");
    c.port = get<int>(j, "port", c.port, "config");
    c.data_dir = resolve(base, get<string>(j, "data_dir", "data", "config"));
    if (j.contains("lexicon"))
        c.lexicon = resolve(base, get<string>(j, "lexicon", "", "config"));
    if (j.contains("templates"))
        c.templates = resolve(base, get<string>(j, "templates", "", "config"));
    if (j.contains("planner"))
        c.planner = planner::planner_config_from_json(j.at("planner"));
    if (j.contains("provider"))
        c.provider = provider_from_json(j.at("provider"), base);
    c.session_capacity = get<size_t>(j, "session_capacity", c.session_capacity, "config");
    c.max_body_bytes = get<size_t>(j, "max_body_bytes", c.max_body_bytes, "config");
    c.threads = get<int>(j, "threads", c.threads, "config");
    validate(c);
    return c;
}

ServiceConfig load_service_config(const fs::path &file) {
    ifstream in(file);
    if (!in)
        throw ConfigError("cannot read config file " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file " + file.string() + ": " + e.what());
    }
    return service_config_from_json(j, file.parent_path().empty() ? fs::path(".") : file.parent_path());
}

void validate(const ServiceConfig &c) {
    if (c.port < 0 || c.port > 65535)
        throw ConfigError("port must lie in [0, 65535]");
    if (c.session_capacity < 1)
        throw ConfigError("session_capacity must be at least 1");
    if (c.max_body_bytes < 1)
        throw ConfigError("max_body_bytes must be at least 1");
    if (c.threads < 1)
        throw ConfigError("threads must be at least 1");
    c.planner.validate();
    if (!fs::is_directory(c.data_dir))
        throw ConfigError("data_dir " + c.data_dir.string() + " is not a directory");
    for (const auto &p : {c.lexicon, c.templates})
        if (p && !fs::is_regular_file(*p))
            throw ConfigError("missing file " + p->string());
    for (const char *f : {"lexicon.jsonl", "wordlist.txt", "gpc_corpus.json", "suffixing_rules.json",
                          "error_taxonomy.json", "templates.json"})
        if (!fs::is_regular_file(c.data_dir / f))
            throw ConfigError("missing data file " + (c.data_dir / f).string());
}

} // namespace swi::service
