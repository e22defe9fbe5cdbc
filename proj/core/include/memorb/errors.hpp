#pragma once

#include <stdexcept>
#include <string>

namespace memorb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Persistence medium failure (open/write/flush).
struct StorageError : Error {
    using Error::Error;
};

// Remote adapter (LLM or embedder) transport failure.
struct TransportError : Error {
    using Error::Error;
};

struct DimMismatchError : Error {
    using Error::Error;
};

struct FormatVersionError : Error {
    using Error::Error;
};

struct MalformedIdError : Error {
    using Error::Error;
};

struct IncompleteTrajectoryError : Error {
    using Error::Error;
};

struct TemplateError : Error {
    using Error::Error;
};

// Violated numeric precondition (pass_k domain, ragged trial counts, ...).
struct DomainError : Error {
    using Error::Error;
};

}  // namespace memorb
