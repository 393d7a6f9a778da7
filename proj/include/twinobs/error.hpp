#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinobs {

enum class ErrorCode {
    InvalidInput,
    NonHermitian,
    ConvergenceFailure,
    DimensionMismatch,
    NotPositive,
    NotNormalized,
    WeightError,
    NotReducible,
    SpectraMismatch,
    DegenerateSpectrumCollision,
    NotSymmetric,
    SparsityViolation,
    NotPure,
    OffDiagonalLeak,
    NotProjector,
    UnsupportedSpin,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers what failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace twinobs
