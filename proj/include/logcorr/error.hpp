#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logcorr {

// Every failure the toolkit can report, shared across modules so callers
// (and tests) can branch on the kind instead of parsing messages.
enum class ErrorCode {
    // ingest
    MalformedRow,
    NonMonotonicTime,
    NegativeSize,
    EmptyFile,
    TooFewHosts,
    IntervalMismatch,
    MissingSample,
    DuplicateHost,
    // corr-engine
    TooShort,
    EmptySequence,
    BadThreshold,
    // evaluator
    MissingClass,
    DegenerateCurve,
    // simulator
    InvalidConfig,
    // agent / collector
    PathVanishedAtStart,
    BadAddress,
    // generic plumbing (file open, socket syscalls)
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::NegativeSize: return "NegativeSize";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::TooFewHosts: return "TooFewHosts";
    case ErrorCode::IntervalMismatch: return "IntervalMismatch";
    case ErrorCode::MissingSample: return "MissingSample";
    case ErrorCode::DuplicateHost: return "DuplicateHost";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::BadThreshold: return "BadThreshold";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::PathVanishedAtStart: return "PathVanishedAtStart";
    case ErrorCode::BadAddress: return "BadAddress";
    case ErrorCode::Io: return "Io";
    }
    return "UnknownError";
}

} // namespace logcorr
