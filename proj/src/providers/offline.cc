#include "offline.h"

#include "../common/errors.h"

namespace swi::providers {

void OfflineBackend::register_handler(Task task, Handler handler) {
    handlers[task] = std::move(handler);
}

ProviderResponse OfflineBackend::complete(const ProviderRequest &request) {
    auto it = handlers.find(request.task);
    if (it == handlers.end())
        throw ProviderFailure("unsupported", "offline backend has no handler for " + to_string(request.task));
    try {
        return {request.task, it->second(request.payload), 0};
    } catch (const UnknownWord &e) {
        throw ProviderFailure("unknown_word", e.word);
    } catch (const ProviderFailure &) {
        throw;
    } catch (const Error &e) {
        throw ProviderFailure("offline_error", e.what());
    }
}

} // namespace swi::providers
