#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curveflow {

enum class ErrorCode {
    DegenerateCurve,
    SizeMismatch,
    InvalidInput,
    NonHorizontalPath,
    RequiresPositiveA,
    NonConvergence,
    BlowupDetected,
    DegeneratePlane,
    StiffnessFailure,
    SingularAngle,
    GridTooCoarse,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateCurve: return "DegenerateCurve";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NonHorizontalPath: return "NonHorizontalPath";
        case ErrorCode::RequiresPositiveA: return "RequiresPositiveA";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::BlowupDetected: return "BlowupDetected";
        case ErrorCode::DegeneratePlane: return "DegeneratePlane";
        case ErrorCode::StiffnessFailure: return "StiffnessFailure";
        case ErrorCode::SingularAngle: return "SingularAngle";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    }
    return "Unknown";
}

/// Every library failure carries one of the codes above; the CLI maps it to a
/// structured JSON error.
class CurveError : public std::runtime_error {
public:
    CurveError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace curveflow
