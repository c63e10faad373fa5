#pragma once

#include "weakmeas/pointer.hpp"
#include "weakmeas/qops.hpp"
#include "weakmeas/weak_values.hpp"

namespace weakmeas {

/// One pre/post-selected pointer measurement: U = exp(-i g A p) applied to
/// rho_s (x) rho_d, followed by post-selection on Pi_f.
///
/// `g` is the coupling as given for the raw observable; the evolution uses
/// coupling() = g * observable.scale() together with the unit-norm matrix.
struct Scenario {
  Observable observable;
  SystemState pre;
  PostSelection post;
  double g = 0.0;
  PointerState pointer;

  double coupling() const { return g * observable.scale(); }
  bool pure() const { return pre.is_pure() && post.is_pure(); }
};

/// Checks that all system-side dimensions agree and g is finite.
Scenario make_scenario(Observable observable, SystemState pre, PostSelection post, double g,
                       PointerState pointer);

}  // namespace weakmeas
