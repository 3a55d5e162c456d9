#pragma once

#include <stdexcept>
#include <string>

namespace vfp {

enum class ErrorCode {
    grid_too_small,
    invalid_params,
    invalid_angle,
    zero_tangent,
    non_finite_state,
    degenerate_stretch,
    stage_blowup,
    step_underflow,
    no_transition,
    frame_degenerate,
    hypothesis_violated,
    profile_blowup,
    io_error,
    schema_mismatch,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::grid_too_small: return "GridTooSmall";
        case ErrorCode::invalid_params: return "InvalidParams";
        case ErrorCode::invalid_angle: return "InvalidAngle";
        case ErrorCode::zero_tangent: return "ZeroTangent";
        case ErrorCode::non_finite_state: return "NonFiniteState";
        case ErrorCode::degenerate_stretch: return "Degenerate";
        case ErrorCode::stage_blowup: return "StageBlowup";
        case ErrorCode::step_underflow: return "StepUnderflow";
        case ErrorCode::no_transition: return "NoTransition";
        case ErrorCode::frame_degenerate: return "FrameDegenerate";
        case ErrorCode::hypothesis_violated: return "HypothesisViolated";
        case ErrorCode::profile_blowup: return "ProfileBlowup";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::schema_mismatch: return "SchemaMismatch";
    }
    return "UnknownError";
}

} // namespace vfp
