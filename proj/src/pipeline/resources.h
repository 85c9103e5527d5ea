#pragma once

#include "../analysis/suffixing.h"
#include "../analysis/taxonomy.h"
#include "../hypotheses/templates.h"
#include "../linguistics/gpc_corpus.h"
#include "../linguistics/lexicon.h"
#include "../planner/config.h"
#include "../providers/provider.h"

#include <filesystem>

namespace swi::pipeline {

struct Resources {
    std::filesystem::path data_dir;
    linguistics::Lexicon lexicon;
    linguistics::GraphemePhonemeCorpus corpus;
    analysis::SuffixingRules rules;
    analysis::ErrorTaxonomy taxonomy;
    hypotheses::TemplateLibrary templates;
    planner::PlannerConfig config;
};

struct ResourcePaths {
    std::filesystem::path lexicon, wordlist, gpc_corpus, suffixing_rules, taxonomy, templates;

    // lexicon.jsonl, wordlist.txt, gpc_corpus.json, suffixing_rules.json,
    // error_taxonomy.json and templates.json inside `data_dir`.
    static ResourcePaths in(const std::filesystem::path &data_dir);
};

Resources load_resources(const ResourcePaths &paths, const planner::PlannerConfig &config = {});
Resources load_resources(const std::filesystem::path &data_dir, const planner::PlannerConfig &config = {});

// Offline backend with every task handler registered. `resources` must
// outlive the handle.
providers::ProviderHandle make_offline_provider(const Resources &resources);

} // namespace swi::pipeline
