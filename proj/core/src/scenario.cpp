#include "weakmeas/scenario.hpp"

#include <cmath>

#include "weakmeas/error.hpp"

namespace weakmeas {

Scenario make_scenario(Observable observable, SystemState pre, PostSelection post, double g,
                       PointerState pointer) {
  if (observable.dim() != pre.dim() || observable.dim() != post.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observable, pre-selection and post-selection dimensions differ");
  }
  if (!std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "coupling g must be finite");
  return Scenario{std::move(observable), std::move(pre), std::move(post), g, std::move(pointer)};
}

}  // namespace weakmeas
