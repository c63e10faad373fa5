#pragma once

// Closed-form perturbative predictions of the pointer shifts.
//
//  - predict_aav: first-order shifts driven by the weak value.
//  - predict_general: second-order non-orthogonal shifts with the resummed
//    normalization C = [1 + 2g<p> Im A_w + g^2 <p^2>(<A>_w^{1,1} - Re<A^2>_w)]^{-1}.
//    The full centered-moment form is evaluated, so off-center grid pointers
//    are handled.
//  - predict_orthogonal / predict_orthogonal_gaussian: exactly orthogonal
//    pre/post-selection, driven by A_ow = <f|A^2|i> / (2<f|A|i>).
//  - stern_gerlach_outcome / sg_optimum: the spin-1/2 closed form and its
//    maximum over the pre-selection angle.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/scenario.hpp"

namespace weakmeas {

enum class Regime { Aav, GeneralNonOrthogonal, Orthogonal, OrthogonalGaussian };

std::string_view regime_name(Regime regime) noexcept;

struct PeakPositions {
  std::array<double, 2> q{};
  std::array<double, 2> p{};
};

struct ShiftPrediction {
  double delta_q = 0.0;
  double delta_p = 0.0;
  std::optional<double> var_q_out;
  std::optional<double> var_p_out;
  std::optional<double> denominator_c;
  Regime regime = Regime::Aav;
  std::optional<PeakPositions> peaks;

  /// A_w for the non-orthogonal regimes, A_ow for the orthogonal ones.
  Complex weak_value;
  /// Post-selection probability implied by the same order of perturbation.
  double success_prob = 0.0;
  double weak_margin = 0.0;
  /// Only for pure pre/post-selection; +inf when orthogonal.
  std::optional<double> aav_margin;
  std::vector<std::string> warnings;
};

struct PredictOptions {
  Thresholds thresholds;
  int margin_order = kDefaultMarginOrder;
};

ShiftPrediction predict_aav(const Scenario& s, const PredictOptions& options = {});
ShiftPrediction predict_general(const Scenario& s, const PredictOptions& options = {});
ShiftPrediction predict_orthogonal(const Scenario& s, const PredictOptions& options = {});
ShiftPrediction predict_orthogonal_gaussian(const Scenario& s, const PredictOptions& options = {});

/// predict_general when the pre/post-selection overlap exceeds the orthogonal
/// threshold, otherwise the orthogonal predictor (Gaussian form for Gaussian
/// pointers).
ShiftPrediction predict_auto(const Scenario& s, const PredictOptions& options = {});

/// Spin pre-selected along xi at angle alpha from x in the xz-plane,
/// post-selected on +x, coupling strength lambda = |g| / dp_z.
struct SGParams {
  double alpha = 0.0;
  double lambda = 0.0;

  /// Validates alpha in [0, pi] and 0 < lambda < 1.
  static SGParams make(double alpha, double lambda);
  /// lambda above 0.5 is outside the weak-interaction regime.
  bool strong() const { return lambda > 0.5; }
};

/// sin(alpha) / ((1 - lambda^2/2) cos(alpha) + 1).
double stern_gerlach_outcome(const SGParams& params);

struct SgOptimum {
  double alpha_opt = 0.0;
  double max_outcome = 0.0;
};

/// Stationary point of stern_gerlach_outcome in alpha:
/// cos(alpha_opt) = lambda^2/2 - 1, max = 1/sqrt(lambda^2 - lambda^4/4).
SgOptimum sg_optimum(double lambda);

/// Stern-Gerlach setup mapped onto a pointer measurement: A = sigma_z, pre =
/// spin along xi(alpha), post = +x, Gaussian pointer with delta_q = g/lambda
/// so that g^2 var p = lambda^2/4. predict_general(...).delta_q / g then equals
/// stern_gerlach_outcome.
Scenario sg_scenario(double alpha, double lambda, double g = 1.0);

}  // namespace weakmeas
