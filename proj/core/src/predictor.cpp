#include "weakmeas/predictor.hpp"

#include <cmath>
#include <numbers>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

constexpr double kCenteringTol = 1e-10;

void attach_margins(ShiftPrediction& out, const Scenario& s, const PredictOptions& options) {
  out.weak_margin = weak_interaction_margin(s.coupling(), s.pointer, options.margin_order);
  if (s.pure()) {
    out.aav_margin = aav_margin(s.observable, s.pre, s.post, s.coupling(), s.pointer,
                                options.margin_order);
  }
}

void require_pure(const Scenario& s, ErrorCode code, const char* what) {
  if (!s.pure()) throw Error(code, what);
}

void require_centered(const PointerState& pointer) {
  const double scale_q = std::sqrt(std::max(pointer.var_q(), 1e-300));
  const double scale_p = std::sqrt(std::max(pointer.var_p(), 1e-300));
  if (std::abs(pointer.mean_q()) > kCenteringTol * std::max(1.0, scale_q) ||
      std::abs(pointer.mean_p()) > kCenteringTol * std::max(1.0, scale_p)) {
    throw Error(ErrorCode::PointerNotCentered,
                "this prediction assumes a pointer with <q> = <p> = 0");
  }
}

void require_even(const PointerState& pointer) {
  const double p2 = moment(pointer, MomentSpec::p(2));
  for (int n = 1; n <= kMaxGridMomentOrder; n += 2) {
    const double value = moment(pointer, MomentSpec::p(n));
    if (std::abs(value) > kCenteringTol * std::max(1.0, std::pow(p2, 0.5 * n))) {
      throw Error(ErrorCode::PointerNotEven,
                  "orthogonal predictions need a pointer with vanishing odd p-moments");
    }
  }
}

}  // namespace

std::string_view regime_name(Regime regime) noexcept {
  switch (regime) {
    case Regime::Aav: return "aav";
    case Regime::GeneralNonOrthogonal: return "general";
    case Regime::Orthogonal: return "orthogonal";
    case Regime::OrthogonalGaussian: return "orthogonal-gaussian";
  }
  return "unknown";
}

ShiftPrediction predict_aav(const Scenario& s, const PredictOptions& options) {
  require_pure(s, ErrorCode::MixedStateUnsupported, "AAV prediction needs pure pre/post-selection");
  const Complex aw = weak_value(s.observable, s.pre, s.post, options.thresholds).value;
  require_centered(s.pointer);

  const double g = s.coupling();
  ShiftPrediction out;
  out.regime = Regime::Aav;
  out.weak_value = aw;
  out.delta_q = g * aw.real() + g * aw.imag() * moment(s.pointer, MomentSpec::anticomm_qp());
  out.delta_p = 2.0 * g * aw.imag() * s.pointer.var_p();
  out.success_prob = overlap(s.post, s.pre);
  attach_margins(out, s, options);
  return out;
}

ShiftPrediction predict_general(const Scenario& s, const PredictOptions& options) {
  const auto& t = options.thresholds;
  const Complex aw = weak_value(s.observable, s.pre, s.post, t).value;
  const Complex w11 = generalized_weak_value(s.observable, s.pre, s.post, 1, 1, t).value;
  const Complex w20 = generalized_weak_value(s.observable, s.pre, s.post, 2, 0, t).value;
  const double x = w11.real() - w20.real();

  const PointerState& ptr = s.pointer;
  const double p1 = ptr.mean_p();
  const double q1 = ptr.mean_q();
  const double p2 = moment(ptr, MomentSpec::p(2));
  const double p3 = moment(ptr, MomentSpec::p3());
  const double var_p = p2 - p1 * p1;
  const double anticomm_centered = moment(ptr, MomentSpec::anticomm_qp()) - 2.0 * q1 * p1;
  const double pqp = moment(ptr, MomentSpec::pqp());

  const double g = s.coupling();
  const double c_inv = 1.0 + 2.0 * g * p1 * aw.imag() + g * g * p2 * x;
  if (!(c_inv > 0.0)) {
    throw Error(ErrorCode::NonPositiveDenominator,
                "second-order normalization is not positive; perturbation theory has failed");
  }
  const double c = 1.0 / c_inv;

  ShiftPrediction out;
  out.regime = Regime::GeneralNonOrthogonal;
  out.weak_value = aw;
  out.denominator_c = c;
  out.delta_q = c * (g * aw.real() + g * aw.imag() * anticomm_centered +
                     g * g * (pqp - p2 * q1) * x + g * g * p1 * w20.imag());
  out.delta_p = c * (2.0 * g * aw.imag() * var_p + g * g * (p3 - p2 * p1) * x);
  out.success_prob = overlap(s.post, s.pre) * c_inv;
  attach_margins(out, s, options);
  if (out.weak_margin >= 0.3) {
    out.warnings.push_back("weak-interaction margin >= 0.3: outside the validity range");
  } else if (out.weak_margin > 0.1) {
    out.warnings.push_back("weak-interaction margin above 0.1");
  }
  return out;
}

ShiftPrediction predict_orthogonal(const Scenario& s, const PredictOptions& options) {
  const auto& t = options.thresholds;
  if (overlap(s.post, s.pre) > t.orth) {
    throw Error(ErrorCode::NotOrthogonal, "pre- and post-selection are not orthogonal");
  }
  require_pure(s, ErrorCode::UnsupportedMixedOrthogonal,
               "orthogonal shift formulas are implemented for pure pre/post-selection only");
  const Complex aow = orthogonal_weak_value(s.observable, s.pre, s.post, 1, 0, t).value;
  require_even(s.pointer);

  const PointerState& ptr = s.pointer;
  const double p2 = moment(ptr, MomentSpec::p(2));
  const double p4 = moment(ptr, MomentSpec::p(4));
  const double g = s.coupling();

  ShiftPrediction out;
  out.regime = Regime::Orthogonal;
  out.weak_value = aow;
  out.delta_q = g * aow.real() + g * aow.imag() * moment(ptr, MomentSpec::p_brace_p()) / p2;
  out.delta_p = 2.0 * g * aow.imag() * p4 / p2;
  out.var_q_out = moment(ptr, MomentSpec::pq2p()) / p2;
  out.var_p_out = p4 / p2;
  out.success_prob = g * g * selection_trace(s.observable, s.pre, s.post, 1, 1).real() * p2;
  attach_margins(out, s, options);
  return out;
}

ShiftPrediction predict_orthogonal_gaussian(const Scenario& s, const PredictOptions& options) {
  if (!s.pointer.is_gaussian()) {
    throw Error(ErrorCode::InvalidArgument, "the Gaussian specialization needs a Gaussian pointer");
  }
  const auto& t = options.thresholds;
  if (overlap(s.post, s.pre) > t.orth) {
    throw Error(ErrorCode::NotOrthogonal, "pre- and post-selection are not orthogonal");
  }
  require_pure(s, ErrorCode::UnsupportedMixedOrthogonal,
               "orthogonal shift formulas are implemented for pure pre/post-selection only");
  const Complex aow = orthogonal_weak_value(s.observable, s.pre, s.post, 1, 0, t).value;

  const GaussianPointer& gp = s.pointer.as_gaussian();
  const double g = s.coupling();
  const double dq = gp.delta_q;
  const double dp = gp.delta_p();

  ShiftPrediction out;
  out.regime = Regime::OrthogonalGaussian;
  out.weak_value = aow;
  out.delta_q = g * aow.real();
  out.delta_p = 6.0 * g * aow.imag() * gp.var_p();
  out.var_q_out = 3.0 * gp.var_q();
  out.var_p_out = 3.0 * gp.var_p();
  PeakPositions peaks;
  const double qc = g * aow.real();
  const double pc = g * aow.imag() * dp * dp;
  peaks.q = {qc - std::numbers::sqrt2 * dq, qc + std::numbers::sqrt2 * dq};
  peaks.p = {pc - std::numbers::sqrt2 * dp, pc + std::numbers::sqrt2 * dp};
  out.peaks = peaks;
  out.success_prob = g * g * selection_trace(s.observable, s.pre, s.post, 1, 1).real() * gp.var_p();
  attach_margins(out, s, options);
  return out;
}

ShiftPrediction predict_auto(const Scenario& s, const PredictOptions& options) {
  if (overlap(s.post, s.pre) > options.thresholds.orth) return predict_general(s, options);
  if (s.pointer.is_gaussian()) return predict_orthogonal_gaussian(s, options);
  return predict_orthogonal(s, options);
}

SGParams SGParams::make(double alpha, double lambda) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, pi]");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::LambdaOutOfRange, "lambda must lie in (0, 1)");
  }
  return {alpha, lambda};
}

double stern_gerlach_outcome(const SGParams& params) {
  const double denominator =
      (1.0 - 0.5 * params.lambda * params.lambda) * std::cos(params.alpha) + 1.0;
  if (!(denominator > 1e-12)) {
    throw Error(ErrorCode::DegenerateDenominator, "Stern-Gerlach outcome denominator vanishes");
  }
  return std::sin(params.alpha) / denominator;
}

SgOptimum sg_optimum(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::LambdaOutOfRange, "lambda must lie in (0, 1)");
  }
  const double l2 = lambda * lambda;
  return {std::acos(0.5 * l2 - 1.0), 1.0 / std::sqrt(l2 - 0.25 * l2 * l2)};
}

Scenario sg_scenario(double alpha, double lambda, double g) {
  const SGParams params = SGParams::make(alpha, lambda);
  if (!(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "g must be positive");
  const double theta = 0.5 * std::numbers::pi - params.alpha;
  Vector xi(2);
  xi << std::cos(0.5 * theta), std::sin(0.5 * theta);
  Vector plus_x(2);
  plus_x << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
  return make_scenario(Observable::from_matrix(pauli::z()), SystemState::from_vector(xi),
                       PostSelection::from_vector(plus_x), g,
                       PointerState::gaussian(g / params.lambda));
}

}  // namespace weakmeas
