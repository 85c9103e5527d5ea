#pragma once

#include "config.h"

#include "../pipeline/resources.h"
#include "../program/plan.h"
#include "../runtime/session.h"

#include <list>
#include <memory>
#include <mutex>
#include <random>

namespace httplib {
class Server;
}

namespace swi::service {

// Least-recently-used map; evicts the oldest entry beyond capacity.
template <typename V> class LruStore {
public:
    explicit LruStore(std::size_t capacity) : capacity(capacity) {}

    void put(const std::string &key, std::shared_ptr<V> value) {
        std::lock_guard lock(mutex);
        if (auto it = index.find(key); it != index.end())
            order.erase(it->second.second);
        order.push_front(key);
        index[key] = {std::move(value), order.begin()};
        while (index.size() > capacity) {
            index.erase(order.back());
            order.pop_back();
        }
    }
    std::shared_ptr<V> get(const std::string &key) {
        std::lock_guard lock(mutex);
        auto it = index.find(key);
        if (it == index.end())
            return nullptr;
        order.splice(order.begin(), order, it->second.second);
        return it->second.first;
    }
    std::size_t size() const {
        std::lock_guard lock(mutex);
        return index.size();
    }

private:
    std::size_t capacity;
    mutable std::mutex mutex;
    std::list<std::string> order;
    std::map<std::string, std::pair<std::shared_ptr<V>, std::list<std::string>::iterator>> index;
};

// One learner session; steps on the same session are serialized.
struct SessionEntry {
    explicit SessionEntry(runtime::Session s) : session(std::move(s)) {}
    std::mutex mutex;
    runtime::Session session;
};

struct Reply {
    int status = 200;
    nlohmann::json body;
};

providers::ProviderHandle make_provider(const ProviderConfig &config, const pipeline::Resources &resources);

nlohmann::json session_view(const runtime::Session &s);

class Service {
public:
    explicit Service(ServiceConfig config);
    // For tests: a prepared provider over the given resources.
    Service(ServiceConfig config, std::unique_ptr<pipeline::Resources> resources,
            providers::ProviderHandle provider);
    ~Service();

    Reply check(const std::string &body, const std::string &content_type = "text/plain");
    Reply inquiry(const std::string &body);
    Reply create_session(const std::string &body);
    Reply step(const std::string &session_id, const std::string &body);
    Reply get_session(const std::string &session_id);
    Reply get_plan(const std::string &plan_id);
    Reply health() const;

    // Binds the configured host/port (port 0: any free port); returns the port.
    int bind();
    // Serves until stop(); call after bind().
    void serve();
    void stop();

    const pipeline::Resources &resources() const { return *res; }

private:
    void mount();
    std::string new_session_id();

    ServiceConfig cfg;
    std::unique_ptr<pipeline::Resources> res;
    providers::ProviderHandle provider;
    LruStore<SessionEntry> sessions;
    LruStore<program::ExecutionPlan> plans;
    std::mutex id_mutex;
    std::mt19937_64 id_rng;
    std::unique_ptr<httplib::Server> http;
};

} // namespace swi::service
