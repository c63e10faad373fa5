#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weakmeas {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonHermitian,
  ZeroOperator,
  InvalidState,
  InvalidProjector,
  NonPositiveWidth,
  InvalidGrid,
  UnsupportedOrder,
  OrthogonalPPS,
  NotOrthogonal,
  HigherOrderOrthogonality,
  OrderTooLarge,
  MixedStateUnsupported,
  PointerNotCentered,
  PointerNotEven,
  NonPositiveDenominator,
  UnsupportedMixedOrthogonal,
  DegenerateDenominator,
  LambdaOutOfRange,
  ZeroPostSelectionProbability,
  GridTooSmall,
  SeriesDiverging,
  NotApplicable,
  WeakInteractionViolated,
  EmptyGrid,
  InvalidBracket,
  NotUnimodal,
  ConstructionFailure,
};

/// Stable kebab-case name, used as the machine-readable error code by the CLI.
std::string_view code_name(ErrorCode code) noexcept;

/// True for errors that describe the physics of a scenario (regime, validity)
/// rather than malformed input.
bool is_regime_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace weakmeas
