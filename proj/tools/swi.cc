// Command-line front end: single-word inquiries, batch evaluation and the HTTP service.

#include "common/errors.h"
#include "pipeline/pipeline.h"
#include "program/plan.h"
#include "service/batch.h"
#include "service/config.h"
#include "service/service.h"

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace swi;
using nlohmann::json;

namespace {

constexpr int exit_pipeline = 2;
constexpr int exit_config = 3;

struct Common {
    std::string config_file;
    std::string data_dir;
    std::string backend;
};

service::ServiceConfig resolve_config(const Common &c) {
    service::ServiceConfig cfg;
    if (!c.config_file.empty()) {
        cfg = service::load_service_config(c.config_file);
    } else if (const char *env = std::getenv("SWI_DATA_DIR")) {
        cfg.data_dir = env;
    }
    if (!c.data_dir.empty())
        cfg.data_dir = c.data_dir;
    if (c.backend == "remote")
        cfg.provider.backend = providers::BackendKind::remote;
    else if (c.backend == "offline")
        cfg.provider.backend = providers::BackendKind::offline;
    service::validate(cfg);
    return cfg;
}

struct Runtime {
    std::unique_ptr<pipeline::Resources> resources;
    providers::ProviderHandle provider;
};

Runtime open(const service::ServiceConfig &cfg) {
    auto paths = pipeline::ResourcePaths::in(cfg.data_dir);
    if (cfg.lexicon)
        paths.lexicon = *cfg.lexicon;
    if (cfg.templates)
        paths.templates = *cfg.templates;
    Runtime rt;
    rt.resources = std::make_unique<pipeline::Resources>(pipeline::load_resources(paths, cfg.planner));
    rt.provider = service::make_provider(cfg.provider, *rt.resources);
    return rt;
}

std::string read_all(std::istream &in) {
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

detection::AttemptContext single_context(const std::string &attempt, const std::string &target,
                                         const std::string &sentence) {
    detection::AttemptContext c;
    c.attempt = attempt;
    c.target = target;
    c.sentence = sentence.empty() ? attempt : sentence;
    c.document_excerpt = c.sentence;
    const auto at = c.sentence.find(attempt);
    c.span = at == std::string::npos ? std::make_pair(std::size_t{0}, attempt.size())
                                     : std::make_pair(at, at + attempt.size());
    if (at == std::string::npos)
        c.sentence = c.document_excerpt = attempt;
    return c;
}

service::Service *running = nullptr;
void on_signal(int) {
    if (running)
        running->stop();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spelling inquiry engine"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config_file, "Service configuration file (JSON)");
    app.add_option("--data", common.data_dir, "Data directory (default: $SWI_DATA_DIR or ./data)");
    app.add_option("--backend", common.backend, "Provider backend")->check(CLI::IsMember({"offline", "remote"}));

    std::string text_arg, file_arg;
    auto *check = app.add_subcommand("check", "Flag misspellings in a document");
    check->add_option("--text", text_arg, "Document text");
    check->add_option("--file", file_arg, "Document file ('-' for stdin)");

    std::string attempt, target, sentence, policy = "always-correct";
    auto *inquiry = app.add_subcommand("inquiry", "Plan an inquiry for one misspelling and print the plan");
    auto *analyze = app.add_subcommand("analyze", "Print every intermediate result for one misspelling");
    auto *run = app.add_subcommand("run", "Plan an inquiry and run it headless; prints the transcript");
    for (auto *sub : {inquiry, analyze, run}) {
        sub->add_option("--attempt", attempt, "Learner spelling")->required();
        sub->add_option("--target", target, "Intended word")->required();
        sub->add_option("--sentence", sentence, "Sentence containing the attempt");
    }
    run->add_option("--policy", policy, "always-correct | always-wrong | empty | scripted:<file>");

    std::string plan_file;
    auto *validate = app.add_subcommand("validate-plan", "Check a plan document");
    validate->add_option("plan", plan_file, "Plan file")->required();

    std::string corpus, out_dir;
    std::string batch_policy = "always-correct";
    auto *batch = app.add_subcommand("batch-evaluate", "Run every marked misspelling of a corpus headless");
    batch->add_option("--corpus", corpus, "Corpus file (JSON lines)")->required();
    batch->add_option("--policy", batch_policy, "always-correct | always-wrong | empty | scripted:<file>");
    batch->add_option("--out", out_dir, "Output directory")->required();

    int port = -1;
    auto *serve = app.add_subcommand("serve", "Start the HTTP service");
    serve->add_option("--port", port, "Port (overrides the config file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        // plan validation needs no data or provider
        if (*validate) {
            std::ifstream in(plan_file);
            if (!in)
                throw ConfigError("cannot read " + plan_file);
            auto plan = program::parse_plan(read_all(in));
            auto violations = program::validate_program(plan);
            for (const auto &v : violations)
                std::cout << v.str() << "\n";
            if (violations.empty())
                std::cout << "ok\n";
            return violations.empty() ? 0 : exit_pipeline;
        }

        auto cfg = resolve_config(common);

        if (*serve) {
            if (port >= 0)
                cfg.port = port;
            service::Service svc(cfg);
            const int bound = svc.bind();
            running = &svc;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << cfg.host << ":" << bound << "\n";
            svc.serve();
            return 0;
        }
        auto rt = open(cfg);
        if (*check) {
            std::string document = text_arg;
            if (!file_arg.empty()) {
                if (file_arg == "-") {
                    document = read_all(std::cin);
                } else {
                    std::ifstream in(file_arg);
                    if (!in)
                        throw ConfigError("cannot read " + file_arg);
                    document = read_all(in);
                }
            }
            json report = detection::detect(document, rt.provider);
            std::cout << report.dump(2) << "\n";
            return 0;
        }
        if (*inquiry || *analyze || *run) {
            auto a = pipeline::analyze(single_context(attempt, target, sentence), *rt.resources, rt.provider);
            if (*inquiry) {
                std::cout << program::serialize_plan(a.plan) << "\n";
            } else if (*analyze) {
                std::cout << pipeline::to_json(a).dump(2) << "\n";
            } else {
                service::WritingSample sample{"cli", a.context.document_excerpt, {}};
                service::MarkedMisspelling m{attempt, target, a.context.span.first, a.context.span.second};
                auto session = runtime::run_headless(a.plan, service::policy_by_name(policy)(sample, m), rt.provider);
                std::cout << runtime::export_transcript(session);
            }
            return 0;
        }
        if (*batch) {
            const auto started = std::chrono::steady_clock::now();
            auto samples = service::load_corpus(corpus);
            auto result = service::batch_evaluate(samples, service::policy_by_name(batch_policy), batch_policy,
                                                  *rt.resources, rt.provider, out_dir);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            for (const auto &w : result.warnings)
                std::cerr << "warning: " << w << "\n";
            for (const auto &f : result.failures)
                std::cerr << "failed: " << f << "\n";
            std::cerr << result.transcripts << " transcripts from " << samples.size() << " samples in " << secs
                      << " s; summary in " << out_dir << "/summary.json\n";
            return result.failures.empty() ? 0 : exit_pipeline;
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_pipeline;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_pipeline;
    }
    return 0;
}
