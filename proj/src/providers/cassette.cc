#include "cassette.h"

#include "../common/errors.h"

#include <fstream>

using namespace std;

namespace swi::providers {

CassetteBackend::CassetteBackend(filesystem::path cassette, CassetteMode mode, shared_ptr<Backend> inner)
    : path(std::move(cassette)), mode(mode), inner(std::move(inner)) {
    if (mode == CassetteMode::record) {
        if (!this->inner)
            throw ConfigError("recording cassette needs a backend to record from");
        ofstream out(path, ios::trunc);
        if (!out)
            throw ConfigError("cassette not writable: " + path.string());
        return;
    }
    ifstream in(path);
    if (!in)
        throw ConfigError("cassette not readable: " + path.string());
    string line;
    while (getline(in, line)) {
        if (line.empty())
            continue;
        json entry = json::parse(line);
        tape[entry.at("request").dump()] = entry.at("response");
    }
}

ProviderResponse CassetteBackend::complete(const ProviderRequest &request) {
    const string key = request.canonical();
    if (mode == CassetteMode::replay) {
        lock_guard lock(mutex);
        auto it = tape.find(key);
        if (it == tape.end())
            throw CassetteMiss("no recorded exchange for " + to_string(request.task) + " request");
        return {request.task, it->second, 0};
    }
    ProviderResponse response = inner->complete(request);
    lock_guard lock(mutex);
    if (!tape.count(key)) {
        tape[key] = response.payload;
        ofstream out(path, ios::app);
        out << json{{"request", json::parse(key)}, {"response", response.payload}}.dump() << "\n";
    }
    return response;
}

ProviderHandle record_replay(const ProviderHandle &handle, const filesystem::path &cassette, CassetteMode mode) {
    return ProviderHandle(handle.kind(), make_shared<CassetteBackend>(cassette, mode, handle.backend()));
}

} // namespace swi::providers
