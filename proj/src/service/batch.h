#pragma once

#include "../pipeline/pipeline.h"
#include "../runtime/session.h"

#include <filesystem>

namespace swi::service {

struct MarkedMisspelling {
    std::string attempt;
    std::string target;
    std::size_t start = 0;
    std::size_t end = 0;
};

struct WritingSample {
    std::string id;
    std::string text;
    std::vector<MarkedMisspelling> misspellings;
};

// One JSON object per line: {"id", "text", "misspellings": [{attempt,
// target, start, end}]}. Throws SchemaError naming the line.
std::vector<WritingSample> load_corpus(const std::filesystem::path &file);
std::vector<WritingSample> corpus_from_jsonl(const std::string &text);

detection::AttemptContext context_for(const WritingSample &sample, const MarkedMisspelling &m);

// Builds a fresh policy per conversation.
using PolicyFactory = std::function<runtime::Policy(const WritingSample &, const MarkedMisspelling &)>;

// "always-correct", "always-wrong", "empty" or "scripted:<file>". A script is
// a JSON object mapping an attempt to the answers given in order, e.g.
// {"constractd": [{"text": "..."}, {"span": [3, 9]}, {"selection": ["u"]}]}.
// Reveal and terminal nodes are acknowledged without using a scripted answer.
// Throws ConfigError for unknown names or unreadable scripts.
PolicyFactory policy_by_name(const std::string &name);
runtime::Policy scripted_policy(const nlohmann::json &answers);

struct BatchResult {
    nlohmann::json summary;
    std::vector<std::string> failures; // one line per failed misspelling
    std::vector<std::string> warnings;
    std::size_t transcripts = 0;
};

// Runs detection-free analysis, synthesis and a headless session for every
// marked misspelling. When `out_dir` is non-empty, writes
// transcripts/<name>.jsonl, plans/<name>.json and summary.json under it.
BatchResult batch_evaluate(const std::vector<WritingSample> &corpus, const PolicyFactory &policy,
                           const std::string &policy_name, const pipeline::Resources &resources,
                           const providers::ProviderHandle &provider, const std::filesystem::path &out_dir = {});

// Distinct inquiry steps a transcript presented.
std::size_t intervention_count(const runtime::Session &session);

} // namespace swi::service
