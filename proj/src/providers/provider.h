#pragma once

#include <json.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace swi::providers {

using nlohmann::json;

enum class Task {
    property_synthesis,
    target_prediction,
    error_ranking,
    descriptor_score,
    trace_generation,
    trace_selection,
    program_synthesis,
    semantic_check,
};

std::string to_string(Task task);
Task task_from_string(const std::string &tag);

struct ProviderRequest {
    Task task;
    json payload;

    // Canonical encoding: sorted keys, compact separators.
    std::string canonical() const;
};

struct ProviderResponse {
    Task task;
    json payload;
    int retries = 0;
};

// Throws SchemaViolation when the payload does not match the task's schema.
void validate_response(Task task, const json &payload);

class Backend {
public:
    virtual ~Backend() = default;
    virtual ProviderResponse complete(const ProviderRequest &request) = 0;
};

enum class BackendKind { offline, remote };

struct EndpointConfig {
    std::string base_url;
    std::string credential_env; // name of the environment variable holding the key
    std::chrono::milliseconds timeout{30000};
    int retry_budget = 3;
    int max_in_flight = 4;
    std::chrono::milliseconds backoff_initial{250};
};

// Shareable handle. Every response, whichever backend produced it, passes
// validate_response before reaching the caller.
class ProviderHandle {
public:
    ProviderHandle() = default;
    ProviderHandle(BackendKind kind, std::shared_ptr<Backend> backend);

    ProviderResponse complete(const ProviderRequest &request) const;
    BackendKind kind() const { return backend_kind; }
    bool is_offline() const { return backend_kind == BackendKind::offline; }
    const std::shared_ptr<Backend> &backend() const { return impl; }

private:
    BackendKind backend_kind = BackendKind::offline;
    std::shared_ptr<Backend> impl;
};

ProviderResponse complete(const ProviderRequest &request, const ProviderHandle &handle);

} // namespace swi::providers
