#pragma once

#include "weakmeas/pointer.hpp"
#include "weakmeas/qops.hpp"

namespace weakmeas {

/// Routing thresholds between the non-orthogonal and orthogonal treatments.
struct Thresholds {
  /// tr(Pi_f rho_s) at or below this is treated as orthogonal.
  double orth = 1e-12;
  /// |tr(Pi_f A rho_s A)| at or below this means the g^2 term vanishes.
  double g2 = 1e-12;
};

enum class WeakValueKind { Standard, Generalized, Orthogonal };

struct WeakValueReport {
  Complex value;
  WeakValueKind kind = WeakValueKind::Standard;
  int m = 1;
  int l = 0;
  /// The normalizing trace, tr(Pi_f rho_s) or tr(Pi_f A rho_s A) (times
  /// (m+1)(l+1) for the orthogonal kind).
  Complex denominator;
};

inline constexpr int kMaxWeakValueOrder = 12;

/// tr(Pi_f A rho_s) / tr(Pi_f rho_s).
WeakValueReport weak_value(const Observable& a, const SystemState& pre, const PostSelection& post,
                           const Thresholds& thresholds = {});

/// tr(Pi_f A^m rho_s A^l) / tr(Pi_f rho_s).
WeakValueReport generalized_weak_value(const Observable& a, const SystemState& pre,
                                       const PostSelection& post, int m, int l,
                                       const Thresholds& thresholds = {});

/// tr(Pi_f A^{m+1} rho_s A^{l+1}) / ((m+1)(l+1) tr(Pi_f A rho_s A)), defined
/// for orthogonal pre/post-selection.
WeakValueReport orthogonal_weak_value(const Observable& a, const SystemState& pre,
                                      const PostSelection& post, int m, int l,
                                      const Thresholds& thresholds = {});

/// Raw trace tr(Pi_f A^m rho_s A^l) without normalization.
Complex selection_trace(const Observable& a, const SystemState& pre, const PostSelection& post,
                        int m, int l);

/// Original (pure-state) weakness diagnostic:
/// max_{1<=n<=n_max} g dp |<f|A^n|i>|^{1/n} / |<f|i>|.
/// Returns +infinity when the pre- and post-selected states are orthogonal.
double aav_margin(const Observable& a, const SystemState& pre, const PostSelection& post,
                  double g, const PointerState& pointer, int n_max);

struct MarginReport {
  double value = 0.0;
  /// Moment order that attained the maximum (1 stands for g dp).
  int attained_at = 1;
};

/// max(g dp, max_{2<=n<=n_max} g |<p^n>|^{1/n}).
MarginReport weak_interaction_margin_report(double g, const PointerState& pointer, int n_max);
double weak_interaction_margin(double g, const PointerState& pointer, int n_max);

inline constexpr int kDefaultMarginOrder = 4;

}  // namespace weakmeas
