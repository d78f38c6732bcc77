#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boostlab {

// Domain failures raised by the library. Each code maps one-to-one onto a
// status value of the C API.
enum class ErrorCode {
    InvalidArgument,
    ParseError,
    OriginSingularity,
    NonpositiveRadius,
    InvalidMassRatio,
    RadiusTooSmall,
    BadRadii,
    OutOfRange,
    EmptySample,
    EnergyBelowThreshold,
    OriginApproach,
    StepFailure,
    EmptyFiber,
    NoChordFound,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace boostlab
