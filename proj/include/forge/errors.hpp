#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forge {

/// Base class for all errors raised by this project.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- dataset ---

class MalformedRecordError : public Error {
public:
    explicit MalformedRecordError(std::size_t line_no, const std::string& detail)
        : Error("malformed record at line " + std::to_string(line_no) + ": " + detail),
          line_no(line_no) {}
    std::size_t line_no;
};

class MissingFieldError : public Error {
public:
    MissingFieldError(std::size_t line_no, std::string field_name)
        : Error("missing field \"" + field_name + "\" at line " + std::to_string(line_no)),
          line_no(line_no),
          field(std::move(field_name)) {}
    std::size_t line_no;
    std::string field;
};

class InvalidSolutionError : public Error {
public:
    explicit InvalidSolutionError(std::size_t line_no, const std::string& detail)
        : Error("invalid solution at line " + std::to_string(line_no) + ": " + detail),
          line_no(line_no) {}
    std::size_t line_no;
};

class NoMarkerError : public Error {
public:
    NoMarkerError() : Error("solution contains no #### final-answer marker") {}
};

class NonNumericPayloadError : public Error {
public:
    explicit NonNumericPayloadError(std::string payload_text)
        : Error("final-answer payload is not numeric: \"" + payload_text + "\""),
          payload(std::move(payload_text)) {}
    std::string payload;
};

class UnbalancedAnnotationError : public Error {
public:
    explicit UnbalancedAnnotationError(std::size_t offset)
        : Error("unbalanced calculator annotation: \"<<\" at offset " + std::to_string(offset) +
                " has no matching \">>\""),
          offset(offset) {}
    std::size_t offset;
};

class NoInsertionError : public Error {
public:
    NoInsertionError() : Error("revised question contains no inserted tokens") {}
};

class InvariantViolationError : public Error {
public:
    InvariantViolationError(std::string id, const std::string& detail)
        : Error("record " + id + " violates an invariant: " + detail),
          source_id(std::move(id)) {}
    std::string source_id;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& detail) : Error("I/O failure: " + detail) {}
};

// --- prompts ---

class MissingSlotError : public Error {
public:
    explicit MissingSlotError(std::string slot_name)
        : Error("no binding for slot {" + slot_name + "}"), slot(std::move(slot_name)) {}
    std::string slot;
};

class UnknownStageError : public Error {
public:
    explicit UnknownStageError(const std::string& detail)
        : Error("unknown stage: " + detail) {}
};

// --- llm client ---

class AuthError : public Error {
public:
    explicit AuthError(const std::string& detail) : Error("authentication failed: " + detail) {}
};

class RateLimitedError : public Error {
public:
    explicit RateLimitedError(const std::string& detail)
        : Error("rate limited after exhausting retries: " + detail) {}
};

class TransportError : public Error {
public:
    explicit TransportError(const std::string& detail) : Error("transport error: " + detail) {}
};

class ContentFilteredError : public Error {
public:
    ContentFilteredError() : Error("completion was blocked by the provider's content filter") {}
};

// --- pipeline ---

class MalformedVerdictError : public Error {
public:
    explicit MalformedVerdictError(std::string raw_text)
        : Error("judge response is neither YES nor NO: \"" + raw_text + "\""),
          raw(std::move(raw_text)) {}
    std::string raw;
};

class EmptyGenerationError : public Error {
public:
    EmptyGenerationError() : Error("generator returned an empty completion") {}
};

// --- cli ---

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& detail) : Error("config error: " + detail) {}
};

class EmptyDatasetError : public Error {
public:
    EmptyDatasetError() : Error("dataset is empty") {}
};

}  // namespace forge
