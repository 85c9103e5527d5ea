#pragma once

#include "provider.h"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <condition_variable>
#include <string>

namespace swi::providers {

struct TransportResult {
    int status = 0; // 0 means the connection itself failed
    std::string body;
    std::string error;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportResult post(const std::string &path, const std::string &body,
                                 const std::map<std::string, std::string> &headers,
                                 std::chrono::milliseconds timeout) = 0;
};

// Plain HTTP transport backed by cpp-httplib.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::string base_url);
    TransportResult post(const std::string &path, const std::string &body,
                         const std::map<std::string, std::string> &headers,
                         std::chrono::milliseconds timeout) override;

private:
    std::string base_url;
};

// Remote model endpoint. Wire format: POST /v1/complete with
// {"task": <tag>, "payload": {...}}; the reply is {"payload": {...}}.
// Failed or malformed replies are retried with exponential backoff up to the
// retry budget, after which ProviderFailure("exhausted") is raised.
class RemoteBackend : public Backend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    RemoteBackend(EndpointConfig config, std::shared_ptr<Transport> transport, Sleeper sleeper = {});
    ProviderResponse complete(const ProviderRequest &request) override;

    int total_retries() const;

private:
    EndpointConfig config;
    std::shared_ptr<Transport> transport;
    Sleeper sleeper;

    mutable std::mutex mutex;
    std::condition_variable slot_free;
    int in_flight = 0;
    int retries_logged = 0;
};

ProviderHandle make_remote_handle(const EndpointConfig &config, std::shared_ptr<Transport> transport = {},
                                  RemoteBackend::Sleeper sleeper = {});

} // namespace swi::providers
