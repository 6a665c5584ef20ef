#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simpnet {

enum class ErrorCode {
  InvalidArgument,
  NonPure,
  AffinelyDependent,
  BadIntersection,
  IndexOutOfRange,
  NotASimplex,
  NonPositiveEpsilon,
  TooManyPoints,
  DegenerateSimplex,
  OffAffineHull,
  InvalidVertexMap,
  NotASimplexImage,
  OutsideDomain,
  SamplerFailure,
  StarConditionUnsatisfied,
  FormatError,
  InvariantViolation,
  Overflow,
  OutsideSimplex,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code; every failure raised by
/// the library is an Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simpnet
