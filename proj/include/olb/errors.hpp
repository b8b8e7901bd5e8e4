#pragma once

#include <stdexcept>
#include <string>

namespace olb {

enum class ErrorKind {
    BadSpec,
    NonConvex,
    BadParams,
    ParallelTangents,
    DegeneratePair,
    RootBracketFailure,
    InsidePoint,
    ConsistencyError,
    NoConvergence,
    MonotonicityLoss,
    IllConditionedFit,
    DegenerateGeometry,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::BadSpec: return "BadSpec";
        case ErrorKind::NonConvex: return "NonConvex";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::ParallelTangents: return "ParallelTangents";
        case ErrorKind::DegeneratePair: return "DegeneratePair";
        case ErrorKind::RootBracketFailure: return "RootBracketFailure";
        case ErrorKind::InsidePoint: return "InsidePoint";
        case ErrorKind::ConsistencyError: return "ConsistencyError";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::MonotonicityLoss: return "MonotonicityLoss";
        case ErrorKind::IllConditionedFit: return "IllConditionedFit";
        case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace olb
