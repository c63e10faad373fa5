#include "weakmeas/weak_values.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

void require_dims(const Observable& a, const SystemState& pre, const PostSelection& post) {
  if (a.dim() != pre.dim() || a.dim() != post.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observable, state and post-selection dimensions differ");
  }
}

void require_order(int m, int l, int max_order) {
  if (m < 0 || l < 0) throw Error(ErrorCode::InvalidArgument, "weak-value orders must be >= 0");
  if (m > max_order || l > max_order) {
    throw Error(ErrorCode::OrderTooLarge,
                "weak-value orders are limited to " + std::to_string(max_order));
  }
}

double require_non_orthogonal(const SystemState& pre, const PostSelection& post,
                              const Thresholds& thresholds) {
  const double ov = overlap(post, pre);
  if (!(ov > thresholds.orth)) {
    throw Error(ErrorCode::OrthogonalPPS,
                "pre- and post-selection are orthogonal; use the orthogonal weak value");
  }
  return ov;
}

}  // namespace

Complex selection_trace(const Observable& a, const SystemState& pre, const PostSelection& post,
                        int m, int l) {
  require_dims(a, pre, post);
  return (post.matrix() * a.power(m) * pre.matrix() * a.power(l)).trace();
}

WeakValueReport weak_value(const Observable& a, const SystemState& pre, const PostSelection& post,
                           const Thresholds& thresholds) {
  auto report = generalized_weak_value(a, pre, post, 1, 0, thresholds);
  report.kind = WeakValueKind::Standard;
  return report;
}

WeakValueReport generalized_weak_value(const Observable& a, const SystemState& pre,
                                       const PostSelection& post, int m, int l,
                                       const Thresholds& thresholds) {
  require_dims(a, pre, post);
  require_order(m, l, kMaxWeakValueOrder);
  require_non_orthogonal(pre, post, thresholds);

  const Complex denominator = selection_trace(a, pre, post, 0, 0);
  const Complex numerator = selection_trace(a, pre, post, m, l);
  return {numerator / denominator, WeakValueKind::Generalized, m, l, denominator};
}

WeakValueReport orthogonal_weak_value(const Observable& a, const SystemState& pre,
                                      const PostSelection& post, int m, int l,
                                      const Thresholds& thresholds) {
  require_dims(a, pre, post);
  require_order(m, l, kMaxWeakValueOrder);
  if (overlap(post, pre) > thresholds.orth) {
    throw Error(ErrorCode::NotOrthogonal,
                "pre- and post-selection overlap; orthogonal weak values are undefined");
  }
  const Complex second = selection_trace(a, pre, post, 1, 1);
  if (!(std::abs(second) > thresholds.g2)) {
    throw Error(ErrorCode::HigherOrderOrthogonality,
                "tr(Pi_f A rho_s A) vanishes; the lowest-order term is beyond g^2");
  }
  const Complex denominator = static_cast<double>((m + 1) * (l + 1)) * second;
  const Complex numerator = selection_trace(a, pre, post, m + 1, l + 1);
  return {numerator / denominator, WeakValueKind::Orthogonal, m, l, denominator};
}

double aav_margin(const Observable& a, const SystemState& pre, const PostSelection& post,
                  double g, const PointerState& pointer, int n_max) {
  require_dims(a, pre, post);
  if (!pre.is_pure() || !post.is_pure()) {
    throw Error(ErrorCode::MixedStateUnsupported, "the AAV margin needs pure pre/post-selection");
  }
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");

  const Vector& psi_i = pre.pure_vector();
  const Vector psi_f = post.pure_vector();
  const double ov = std::abs(psi_f.dot(psi_i));
  if (ov * ov <= Thresholds{}.orth) return std::numeric_limits<double>::infinity();

  const double g_dp = std::abs(g) * pointer.delta_p();
  double worst = 0.0;
  Vector an_psi = psi_i;
  for (int n = 1; n <= n_max; ++n) {
    an_psi = a.matrix() * an_psi;
    const double amp = std::abs(psi_f.dot(an_psi));
    worst = std::max(worst, g_dp * std::pow(amp, 1.0 / n) / ov);
  }
  return worst;
}

MarginReport weak_interaction_margin_report(double g, const PointerState& pointer, int n_max) {
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 2");
  const double abs_g = std::abs(g);
  MarginReport report{abs_g * pointer.delta_p(), 1};
  for (int n = 2; n <= n_max; ++n) {
    const double pn = std::abs(moment(pointer, MomentSpec::p(n)));
    const double value = abs_g * std::pow(pn, 1.0 / n);
    if (value > report.value) report = {value, n};
  }
  return report;
}

double weak_interaction_margin(double g, const PointerState& pointer, int n_max) {
  return weak_interaction_margin_report(g, pointer, n_max).value;
}

}  // namespace weakmeas
