#pragma once

#include <stdexcept>
#include <string>

namespace ampo {

// Root of all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad CLI flags, malformed config files, invalid field values.
struct ConfigError : Error {
    using Error::Error;
};

// --- gateway ---

struct GatewayError : Error {
    using Error::Error;
};

// Network failure or 5xx after retries are exhausted.
struct TransportError : GatewayError {
    using GatewayError::GatewayError;
};

// HTTP 429 after retries are exhausted.
struct RateLimited : GatewayError {
    using GatewayError::GatewayError;
};

// Response body missing the content field (or otherwise unparseable).
struct MalformedResponse : GatewayError {
    using GatewayError::GatewayError;
};

// Scripted backend had no entry matching the request.
struct ScriptMismatch : GatewayError {
    using GatewayError::GatewayError;
};

// --- evaluator ---

// Perfect score on the split: nothing to sample. Signals early stop.
struct NoFailures : Error {
    using Error::Error;
};

// --- agents ---

struct MissingPlaceholder : Error {
    explicit MissingPlaceholder(const std::string& key)
        : Error("template placeholder not provided: " + key), placeholder(key) {}
    std::string placeholder;
};

// Agent completion contained zero <START>...<END> spans. Carries the raw
// completion so the failure can be inspected.
struct NoReasonsParsed : Error {
    explicit NoReasonsParsed(std::string completion)
        : Error("analyzer completion contains no <START>...<END> spans"),
          raw_completion(std::move(completion)) {}
    std::string raw_completion;
};

struct NoPatternsParsed : Error {
    explicit NoPatternsParsed(std::string completion)
        : Error("summarizer completion contains no <START>...<END> spans"),
          raw_completion(std::move(completion)) {}
    std::string raw_completion;
};

// Revisor (or initializer) returned a blank completion.
struct EmptyRevision : Error {
    using Error::Error;
};

// --- run store / replay ---

struct ReplayMismatch : Error {
    ReplayMismatch(const std::string& what, std::size_t index)
        : Error(what), event_index(index) {}
    std::size_t event_index;
};

}  // namespace ampo
