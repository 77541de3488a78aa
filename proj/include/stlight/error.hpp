#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stlight {

enum class ErrorCode {
  NonPhysicalParameter,
  OutOfScheduleRange,
  DegenerateCoefficients,
  NegativeRadicand,
  ChannelOff,
  BranchSelectionFailure,
  ModeBlowup,
  GuardBandBreach,
  GridTooCoarse,
  LinearSolveFailure,
  CFLViolation,
  ThresholdChatter,
  PerturberOffGrid,
  NonDispersiveRegime,
  EmptyField,
  WindowTooShort,
  PhaseUnwrapAmbiguity,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so callers
/// (CLI exit status, python bindings) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace stlight
