#include "stlight/error.hpp"

namespace stlight {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPhysicalParameter: return "NonPhysicalParameter";
    case ErrorCode::OutOfScheduleRange: return "OutOfScheduleRange";
    case ErrorCode::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::ChannelOff: return "ChannelOff";
    case ErrorCode::BranchSelectionFailure: return "BranchSelectionFailure";
    case ErrorCode::ModeBlowup: return "ModeBlowup";
    case ErrorCode::GuardBandBreach: return "GuardBandBreach";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::ThresholdChatter: return "ThresholdChatter";
    case ErrorCode::PerturberOffGrid: return "PerturberOffGrid";
    case ErrorCode::NonDispersiveRegime: return "NonDispersiveRegime";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::PhaseUnwrapAmbiguity: return "PhaseUnwrapAmbiguity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace stlight
