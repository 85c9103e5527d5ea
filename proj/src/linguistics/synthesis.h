#pragma once

#include "lexicon.h"

#include "../providers/provider.h"

namespace swi::linguistics {

// Offline handler for property_synthesis: the lexicon record, with the
// caller's context sentence attached. Throws UnknownWord for missing entries.
nlohmann::json offline_property_synthesis(const nlohmann::json &payload, const Lexicon &lexicon);

// Throws UnknownWord when the provider has no entry, InvariantViolation when
// the returned record is inconsistent, ProviderFailure for other failures.
WordProperties synthesize_properties(const std::string &word, const std::string &context_sentence,
                                     const providers::ProviderHandle &provider);

} // namespace swi::linguistics
