#pragma once

#include "provider.h"

#include <functional>
#include <map>

namespace swi::providers {

// Deterministic backend: each task is answered by a pure handler registered
// by the module that owns the task's rules and fixtures.
class OfflineBackend : public Backend {
public:
    using Handler = std::function<json(const json &payload)>;

    void register_handler(Task task, Handler handler);
    bool handles(Task task) const { return handlers.count(task) > 0; }
    ProviderResponse complete(const ProviderRequest &request) override;

private:
    std::map<Task, Handler> handlers;
};

} // namespace swi::providers
