#pragma once

#include "../planner/config.h"
#include "../providers/cassette.h"
#include "../providers/provider.h"

#include <filesystem>
#include <optional>

namespace swi::service {

struct ProviderConfig {
    providers::BackendKind backend = providers::BackendKind::offline;
    providers::EndpointConfig endpoint;
    std::optional<std::filesystem::path> cassette;
    providers::CassetteMode cassette_mode = providers::CassetteMode::replay;
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080; // 0 picks a free port
    std::filesystem::path data_dir = "data";
    std::optional<std::filesystem::path> lexicon;   // overrides data_dir/lexicon.jsonl
    std::optional<std::filesystem::path> templates; // overrides data_dir/templates.json
    planner::PlannerConfig planner;
    ProviderConfig provider;
    std::size_t session_capacity = 256;
    std::size_t max_body_bytes = 64 * 1024;
    int threads = 8;
};

// Relative paths are resolved against `base_dir`. Unknown keys, bad values
// and missing files raise ConfigError.
ServiceConfig service_config_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir = ".");
ServiceConfig load_service_config(const std::filesystem::path &file);
// Checks ports, capacities and that every data file exists.
void validate(const ServiceConfig &config);

} // namespace swi::service
