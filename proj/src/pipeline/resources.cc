#include "resources.h"

#include "../analysis/diagnosis.h"
#include "../detection/detector.h"
#include "../linguistics/synthesis.h"
#include "../planner/generator.h"
#include "../planner/selector.h"
#include "../program/synthesis.h"
#include "../runtime/session.h"
#include "../providers/offline.h"

using namespace std;
namespace fs = std::filesystem;

namespace swi::pipeline {

ResourcePaths ResourcePaths::in(const fs::path &dir) {
    return {dir / "lexicon.jsonl",        dir / "wordlist.txt",        dir / "gpc_corpus.json",
            dir / "suffixing_rules.json", dir / "error_taxonomy.json", dir / "templates.json"};
}

Resources load_resources(const ResourcePaths &paths, const planner::PlannerConfig &config) {
    config.validate();
    Resources r;
    r.data_dir = paths.lexicon.parent_path();
    r.lexicon = linguistics::Lexicon::load(paths.lexicon, paths.wordlist);
    r.corpus = linguistics::GraphemePhonemeCorpus::load(paths.gpc_corpus);
    r.rules = analysis::SuffixingRules::load(paths.suffixing_rules);
    r.taxonomy = analysis::ErrorTaxonomy::load(paths.taxonomy);
    r.templates = hypotheses::load_templates(paths.templates);
    r.config = config;
    return r;
}

Resources load_resources(const fs::path &data_dir, const planner::PlannerConfig &config) {
    return load_resources(ResourcePaths::in(data_dir), config);
}

providers::ProviderHandle make_offline_provider(const Resources &resources) {
    using providers::Task;
    auto backend = make_shared<providers::OfflineBackend>();
    const Resources *res = &resources;
    auto detector = make_shared<detection::OfflineDetector>(resources.lexicon);

    backend->register_handler(Task::property_synthesis, [res](const nlohmann::json &p) {
        return linguistics::offline_property_synthesis(p, res->lexicon);
    });
    backend->register_handler(Task::target_prediction,
                              [detector](const nlohmann::json &p) { return detector->predict(p); });
    backend->register_handler(Task::error_ranking, analysis::offline_error_ranking);
    backend->register_handler(Task::descriptor_score, hypotheses::offline_descriptor_score);
    backend->register_handler(Task::trace_generation, [res](const nlohmann::json &p) {
        return planner::offline_trace_generation(p, res->templates, res->taxonomy);
    });
    backend->register_handler(Task::trace_selection, planner::offline_trace_selection);
    backend->register_handler(Task::program_synthesis, [res](const nlohmann::json &p) {
        return program::offline_program_synthesis(p, {res->templates, res->corpus, res->rules});
    });
    backend->register_handler(Task::semantic_check, [res](const nlohmann::json &p) {
        return runtime::offline_semantic_check(p, res->lexicon);
    });
    return providers::ProviderHandle(providers::BackendKind::offline, backend);
}

} // namespace swi::pipeline
