#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalinfo {

/// Failure classes raised by the library. The CLI prints the name verbatim.
enum class ErrorKind {
    CycleDetected,
    SelfParent,
    IndexOutOfRange,
    SetsNotDisjoint,
    ScopeMismatch,
    ZeroProbabilityEvidence,
    ModelTooLarge,
    InvalidSpec,
    OverlappingSets,
    UnsupportedModel,
    UndefinedConditional,
    ZNotNondescendants,
    StructureMismatch,
    InvalidModel,
    ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::SelfParent: return "SelfParent";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SetsNotDisjoint: return "SetsNotDisjoint";
    case ErrorKind::ScopeMismatch: return "ScopeMismatch";
    case ErrorKind::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorKind::ModelTooLarge: return "ModelTooLarge";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::UndefinedConditional: return "UndefinedConditional";
    case ErrorKind::ZNotNondescendants: return "ZNotNondescendants";
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace causalinfo
