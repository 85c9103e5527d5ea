#include "remote.h"

#include "../common/errors.h"

#include <httplib.h>

#include <cstdlib>
#include <iostream>
#include <thread>

using namespace std;

namespace swi::providers {

HttpTransport::HttpTransport(string base_url) : base_url(std::move(base_url)) {}

TransportResult HttpTransport::post(const string &path, const string &body,
                                    const map<string, string> &headers, chrono::milliseconds timeout) {
    httplib::Client client(base_url);
    auto secs = chrono::duration_cast<chrono::seconds>(timeout);
    auto usecs = chrono::duration_cast<chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    httplib::Headers h;
    for (const auto &[k, v] : headers)
        h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res)
        return {0, "", httplib::to_string(res.error())};
    return {res->status, res->body, ""};
}

RemoteBackend::RemoteBackend(EndpointConfig config, shared_ptr<Transport> transport, Sleeper sleeper)
    : config(std::move(config)), transport(std::move(transport)), sleeper(std::move(sleeper)) {
    if (this->config.credential_env.empty())
        throw ConfigError("remote provider requires a credential environment variable name");
    if (!this->transport)
        this->transport = make_shared<HttpTransport>(this->config.base_url);
    if (!this->sleeper)
        this->sleeper = [](chrono::milliseconds d) { this_thread::sleep_for(d); };
}

int RemoteBackend::total_retries() const {
    lock_guard lock(mutex);
    return retries_logged;
}

ProviderResponse RemoteBackend::complete(const ProviderRequest &request) {
    {
        unique_lock lock(mutex);
        slot_free.wait(lock, [&] { return in_flight < max(1, config.max_in_flight); });
        ++in_flight;
    }
    struct Release {
        RemoteBackend &self;
        ~Release() {
            lock_guard lock(self.mutex);
            --self.in_flight;
            self.slot_free.notify_one();
        }
    } release{*this};

    map<string, string> headers;
    if (const char *key = getenv(config.credential_env.c_str()))
        headers["Authorization"] = string("Bearer ") + key;
    const string body = json{{"task", to_string(request.task)}, {"payload", request.payload}}.dump();

    string last_error;
    auto delay = config.backoff_initial;
    const int attempts = max(1, config.retry_budget);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            {
                lock_guard lock(mutex);
                ++retries_logged;
            }
            clog << "provider: retry " << attempt << " for " << to_string(request.task) << " after "
                 << last_error << endl;
            sleeper(delay);
            delay *= 2;
        }
        TransportResult result = transport->post("/v1/complete", body, headers, config.timeout);
        if (result.status == 0) {
            last_error = "transport error: " + result.error;
            continue;
        }
        if (result.status != 200) {
            last_error = "HTTP " + std::to_string(result.status);
            continue;
        }
        try {
            json reply = json::parse(result.body);
            if (!reply.is_object() || !reply.contains("payload"))
                throw SchemaViolation("reply lacks 'payload'");
            validate_response(request.task, reply.at("payload"));
            return {request.task, reply.at("payload"), attempt};
        } catch (const json::exception &e) {
            last_error = string("malformed reply: ") + e.what();
        } catch (const SchemaViolation &e) {
            last_error = e.what();
        }
    }
    throw ProviderFailure("exhausted", to_string(request.task) + " failed after " + std::to_string(attempts) +
                                          " attempts; last error: " + last_error);
}

ProviderHandle make_remote_handle(const EndpointConfig &config, shared_ptr<Transport> transport,
                                  RemoteBackend::Sleeper sleeper) {
    return ProviderHandle(BackendKind::remote,
                          make_shared<RemoteBackend>(config, std::move(transport), std::move(sleeper)));
}

} // namespace swi::providers
