// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace gpmp {

enum class ErrorCode {
    OrderUnavailable,
    TimeOutOfRange,
    InsufficientJetOrder,
    StepSizeUnderflow,
    ConstraintViolation,
    SingularBoundaryMatrix,
    NonSolvableForm,
    DegenerateAdjoint,
    DegenerateHorizon,
    BadParams,
    NoClosedForm,
    InconsistentSequence,
    ConfigError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// the command-line runner can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gpmp
