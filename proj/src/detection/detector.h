#pragma once

#include "../linguistics/lexicon.h"
#include "../providers/provider.h"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace swi::detection {

struct AttemptContext {
    std::string attempt;
    std::string target;
    std::string sentence;
    std::string document_excerpt;
    std::pair<std::size_t, std::size_t> span{0, 0};
    bool uncertain = false;
    std::vector<std::string> alternates;

    bool operator==(const AttemptContext &) const = default;
};

enum class Trigger { pause, explicit_check };

struct DetectionReport {
    std::vector<AttemptContext> contexts;
    Trigger trigger = Trigger::explicit_check;
};

struct DetectionWeights {
    double edit = 1.0;
    double prefix = 0.5;
    double context = 1.0;
};

// Lexicon-backed target prediction used by the offline provider: unknown
// tokens are matched to the lexicon entry with the best weighted score of
// (negative edit distance, shared prefix, context-word overlap), and known
// words whose homophone fits the sentence better are flagged as misuse.
class OfflineDetector {
public:
    OfflineDetector(const linguistics::Lexicon &lexicon, DetectionWeights weights = {});
    nlohmann::json predict(const nlohmann::json &payload) const;

private:
    const linguistics::Lexicon &lexicon;
    DetectionWeights weights;
};

DetectionReport detect(const std::string &document, const providers::ProviderHandle &provider,
                       Trigger trigger = Trigger::explicit_check);

// Sentence of `document` that contains offset `pos`.
std::string sentence_around(const std::string &document, std::size_t pos);

std::vector<std::string> content_words(const std::string &text);

std::string to_string(Trigger t);
void to_json(nlohmann::json &j, const AttemptContext &c);
void from_json(const nlohmann::json &j, AttemptContext &c);
void to_json(nlohmann::json &j, const DetectionReport &r);

} // namespace swi::detection
