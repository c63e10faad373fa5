#include "weakmeas/error.hpp"

namespace weakmeas {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NonHermitian: return "non-hermitian";
    case ErrorCode::ZeroOperator: return "zero-operator";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::InvalidProjector: return "invalid-projector";
    case ErrorCode::NonPositiveWidth: return "non-positive-width";
    case ErrorCode::InvalidGrid: return "invalid-grid";
    case ErrorCode::UnsupportedOrder: return "unsupported-order";
    case ErrorCode::OrthogonalPPS: return "orthogonal-pps";
    case ErrorCode::NotOrthogonal: return "not-orthogonal";
    case ErrorCode::HigherOrderOrthogonality: return "higher-order-orthogonality";
    case ErrorCode::OrderTooLarge: return "order-too-large";
    case ErrorCode::MixedStateUnsupported: return "mixed-state-unsupported";
    case ErrorCode::PointerNotCentered: return "pointer-not-centered";
    case ErrorCode::PointerNotEven: return "pointer-not-even";
    case ErrorCode::NonPositiveDenominator: return "non-positive-denominator";
    case ErrorCode::UnsupportedMixedOrthogonal: return "unsupported-mixed-orthogonal";
    case ErrorCode::DegenerateDenominator: return "degenerate-denominator";
    case ErrorCode::LambdaOutOfRange: return "lambda-out-of-range";
    case ErrorCode::ZeroPostSelectionProbability: return "zero-postselection";
    case ErrorCode::GridTooSmall: return "grid-too-small";
    case ErrorCode::SeriesDiverging: return "series-diverging";
    case ErrorCode::NotApplicable: return "not-applicable";
    case ErrorCode::WeakInteractionViolated: return "weak-interaction-violated";
    case ErrorCode::EmptyGrid: return "empty-grid";
    case ErrorCode::InvalidBracket: return "invalid-bracket";
    case ErrorCode::NotUnimodal: return "not-unimodal";
    case ErrorCode::ConstructionFailure: return "construction-failure";
  }
  return "unknown";
}

bool is_regime_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OrthogonalPPS:
    case ErrorCode::NotOrthogonal:
    case ErrorCode::HigherOrderOrthogonality:
    case ErrorCode::MixedStateUnsupported:
    case ErrorCode::PointerNotCentered:
    case ErrorCode::PointerNotEven:
    case ErrorCode::NonPositiveDenominator:
    case ErrorCode::UnsupportedMixedOrthogonal:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::LambdaOutOfRange:
    case ErrorCode::ZeroPostSelectionProbability:
    case ErrorCode::GridTooSmall:
    case ErrorCode::SeriesDiverging:
    case ErrorCode::NotApplicable:
    case ErrorCode::WeakInteractionViolated:
    case ErrorCode::NotUnimodal:
    case ErrorCode::ConstructionFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace weakmeas
