#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownWord : public Error {
public:
    explicit UnknownWord(const std::string &word)
        : Error("unknown word: " + word), word(word) {}
    std::string word;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DuplicateId : public SchemaError {
public:
    using SchemaError::SchemaError;
};

class NoLegalTrace : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &location, const std::string &what)
        : Error(location + ": " + what), location(location) {}
    std::string location;
};

class SynthesisFailure : public Error {
public:
    SynthesisFailure(const std::string &what,
                     std::vector<std::vector<std::string>> attempts)
        : Error(what), violations(std::move(attempts)) {}
    std::vector<std::vector<std::string>> violations;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

class WrongNode : public Error {
public:
    using Error::Error;
};

class AffordanceMismatch : public Error {
public:
    using Error::Error;
};

// Raised by providers when a generative call cannot be served. `reason` is a
// short machine-readable code ("unknown_word", "transport", "exhausted", ...).
class ProviderFailure : public Error {
public:
    ProviderFailure(std::string reason, const std::string &detail)
        : Error(reason + ": " + detail), reason(std::move(reason)), detail(detail) {}
    std::string reason;
    std::string detail;
};

class SchemaViolation : public ProviderFailure {
public:
    explicit SchemaViolation(const std::string &detail)
        : ProviderFailure("schema_violation", detail) {}
};

class CassetteMiss : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace swi
