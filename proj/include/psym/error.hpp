#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psym {

enum class ErrorCode {
    NotSymplectic,
    NotFiniteOrder,
    NotOrthogonalSymplectic,
    LogarithmBranchAmbiguous,
    InsufficientModes,
    EvenMRequired,
    DimensionMismatch,
    IncompatibleSystem,
    IntegratorFailure,
    CrossingUnresolved,
    NegativeAnnulusValue,
    MissingContext,
    UnknownFamily,
    NoSaddleFound,
    NonstationaryLimit,
    RefinementDiverged,
    SigmaNonpositive,
    ConstantOrbit,
    GcdUnstable,
    ShiftTestFailed,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as psym::Error; the code identifies the
// contract violation, the message carries the numbers that triggered it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace psym
