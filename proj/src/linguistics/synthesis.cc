#include "synthesis.h"

#include "../common/errors.h"

#include <cctype>

using namespace std;
using nlohmann::json;

namespace swi::linguistics {

json offline_property_synthesis(const json &payload, const Lexicon &lexicon) {
    const string word = payload.at("word").get<string>();
    const WordProperties *entry = lexicon.find(word);
    if (!entry)
        throw UnknownWord(word);
    WordProperties props = *entry;
    const string sentence = payload.value("context_sentence", "");
    if (!sentence.empty())
        props.context_sentence = sentence;
    return props;
}

WordProperties synthesize_properties(const string &word, const string &context_sentence,
                                     const providers::ProviderHandle &provider) {
    if (word.empty())
        throw SchemaError("word must be non-empty");
    for (char c : word)
        if (!isalpha(static_cast<unsigned char>(c)) && c != '-' && c != '\'' && c != ' ')
            throw SchemaError("word '" + word + "' has characters outside letters, hyphen and apostrophe");

    json payload{{"word", lowercase(word)}, {"context_sentence", context_sentence}};
    providers::ProviderResponse response;
    try {
        response = provider.complete({providers::Task::property_synthesis, payload});
    } catch (const ProviderFailure &e) {
        if (e.reason == "unknown_word")
            throw UnknownWord(word);
        throw;
    }
    WordProperties props;
    try {
        props = response.payload.get<WordProperties>();
    } catch (const nlohmann::json::exception &e) {
        throw SchemaViolation("property_synthesis: " + string(e.what()));
    }
    validate(props);
    return props;
}

} // namespace swi::linguistics
