// SPDX-License-Identifier: MIT
#include "gpmp/errors.hpp"

namespace gpmp {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::OrderUnavailable: return "OrderUnavailable";
        case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
        case ErrorCode::InsufficientJetOrder: return "InsufficientJetOrder";
        case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::SingularBoundaryMatrix: return "SingularBoundaryMatrix";
        case ErrorCode::NonSolvableForm: return "NonSolvableForm";
        case ErrorCode::DegenerateAdjoint: return "DegenerateAdjoint";
        case ErrorCode::DegenerateHorizon: return "DegenerateHorizon";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::NoClosedForm: return "NoClosedForm";
        case ErrorCode::InconsistentSequence: return "InconsistentSequence";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace gpmp
