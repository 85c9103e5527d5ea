#pragma once

#include "provider.h"

#include <filesystem>
#include <map>
#include <mutex>

namespace swi::providers {

enum class CassetteMode { record, replay };

// Cassette file: one JSON object per line,
//   {"request": <canonical request>, "response": <payload>}
// Requests are matched by their canonical encoding.
class CassetteBackend : public Backend {
public:
    // Record mode truncates the cassette and forwards to `inner`.
    CassetteBackend(std::filesystem::path cassette, CassetteMode mode, std::shared_ptr<Backend> inner = {});
    ProviderResponse complete(const ProviderRequest &request) override;

private:
    std::filesystem::path path;
    CassetteMode mode;
    std::shared_ptr<Backend> inner;
    std::map<std::string, json> tape;
    std::mutex mutex;
};

ProviderHandle record_replay(const ProviderHandle &handle, const std::filesystem::path &cassette,
                             CassetteMode mode);

} // namespace swi::providers
