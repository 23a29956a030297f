#include "psym/error.hpp"

namespace psym {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSymplectic: return "NotSymplectic";
        case ErrorCode::NotFiniteOrder: return "NotFiniteOrder";
        case ErrorCode::NotOrthogonalSymplectic: return "NotOrthogonalSymplectic";
        case ErrorCode::LogarithmBranchAmbiguous: return "LogarithmBranchAmbiguous";
        case ErrorCode::InsufficientModes: return "InsufficientModes";
        case ErrorCode::EvenMRequired: return "EvenMRequired";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IncompatibleSystem: return "IncompatibleSystem";
        case ErrorCode::IntegratorFailure: return "IntegratorFailure";
        case ErrorCode::CrossingUnresolved: return "CrossingUnresolved";
        case ErrorCode::NegativeAnnulusValue: return "NegativeAnnulusValue";
        case ErrorCode::MissingContext: return "MissingContext";
        case ErrorCode::UnknownFamily: return "UnknownFamily";
        case ErrorCode::NoSaddleFound: return "NoSaddleFound";
        case ErrorCode::NonstationaryLimit: return "NonstationaryLimit";
        case ErrorCode::RefinementDiverged: return "RefinementDiverged";
        case ErrorCode::SigmaNonpositive: return "SigmaNonpositive";
        case ErrorCode::ConstantOrbit: return "ConstantOrbit";
        case ErrorCode::GcdUnstable: return "GcdUnstable";
        case ErrorCode::ShiftTestFailed: return "ShiftTestFailed";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace psym
