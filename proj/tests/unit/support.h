#pragma once

#include "pipeline/pipeline.h"
#include "pipeline/resources.h"
#include "providers/provider.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace test {

inline const std::filesystem::path data_dir = SWI_DATA_DIR;
inline const std::filesystem::path fixtures_dir = SWI_FIXTURES_DIR;

// Loaded once per process; every test only reads it.
inline const swi::pipeline::Resources &resources() {
    static const swi::pipeline::Resources r = swi::pipeline::load_resources(data_dir);
    return r;
}

inline const swi::providers::ProviderHandle &offline() {
    static const swi::providers::ProviderHandle h = swi::pipeline::make_offline_provider(resources());
    return h;
}

inline std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const swi::linguistics::WordProperties &entry(const std::string &word) {
    return *resources().lexicon.find(word);
}

// Full offline analysis of one pair, using the target's sentence as context.
inline swi::pipeline::Analysis analyze_pair(const std::string &attempt, const std::string &target) {
    swi::detection::AttemptContext ctx;
    ctx.attempt = attempt;
    ctx.target = target;
    ctx.sentence = entry(target).context_sentence;
    return swi::pipeline::analyze(ctx, resources(), offline());
}

} // namespace test
