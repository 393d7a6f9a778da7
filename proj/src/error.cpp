#include "twinobs/error.hpp"

namespace twinobs {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::WeightError: return "WeightError";
        case ErrorCode::NotReducible: return "NotReducible";
        case ErrorCode::SpectraMismatch: return "SpectraMismatch";
        case ErrorCode::DegenerateSpectrumCollision: return "DegenerateSpectrumCollision";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::SparsityViolation: return "SparsityViolation";
        case ErrorCode::NotPure: return "NotPure";
        case ErrorCode::OffDiagonalLeak: return "OffDiagonalLeak";
        case ErrorCode::NotProjector: return "NotProjector";
        case ErrorCode::UnsupportedSpin: return "UnsupportedSpin";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace twinobs
