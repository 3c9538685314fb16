#ifndef FORMALITY_ERRORS_HPP
#define FORMALITY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace formality {

// Failure conditions that carry meaning for the caller (the pipeline embeds
// them in certificates instead of aborting).
enum class ErrorCode {
    ParseError,
    NotChainMap,
    NotSimplyConnected,
    TruncationTooSmall,
    TruncationExceeded,
    LiftObstructed,
    NotWeightDiagonalizable,
    WeightBelowDegree,
    SplittingInvariantFailed,
    PreconditionNotExact,
    HypothesisFailed,
    InvalidInput,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError: return "PARSE_ERROR";
        case ErrorCode::NotChainMap: return "NOT_CHAIN_MAP";
        case ErrorCode::NotSimplyConnected: return "NOT_SIMPLY_CONNECTED";
        case ErrorCode::TruncationTooSmall: return "TRUNCATION_TOO_SMALL";
        case ErrorCode::TruncationExceeded: return "TRUNCATION_EXCEEDED";
        case ErrorCode::LiftObstructed: return "LIFT_OBSTRUCTED";
        case ErrorCode::NotWeightDiagonalizable: return "NOT_WEIGHT_DIAGONALIZABLE";
        case ErrorCode::WeightBelowDegree: return "WEIGHT_BELOW_DEGREE";
        case ErrorCode::SplittingInvariantFailed: return "SPLITTING_INVARIANT_FAILED";
        case ErrorCode::PreconditionNotExact: return "PRECONDITION_NOT_EXACT";
        case ErrorCode::HypothesisFailed: return "HYPOTHESIS_FAILED";
        case ErrorCode::InvalidInput: return "INVALID_INPUT";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace formality

#endif
