#pragma once

// Non-perturbative reference for a pre/post-selected pointer measurement.
//
// evolve_postselect applies U = exp(-i g A p) exactly: on the eigenspace of A
// with eigenvalue a the pointer is translated by g a, so each post-selected
// pointer branch is Phi(q) = sum_a <f_m|P_a|psi_k> phi_j(q - g a). The result
// is exact in the system sector and spectrally accurate on the pointer grid.
//
// series_device_state evaluates the truncated adjoint-expansion of the
// post-selected device state instead, as an independent cross-check.

#include <cstddef>
#include <optional>

#include "weakmeas/pointer.hpp"
#include "weakmeas/scenario.hpp"

namespace weakmeas {

enum class Method { ExactSpectral, TruncatedSeries };

struct MeasurementRecord {
  double success_prob = 0.0;
  double delta_q = 0.0;
  double delta_p = 0.0;
  double var_q_out = 0.0;
  double var_p_out = 0.0;
  /// Normalized output densities; absent when not requested.
  std::optional<Densities> densities;
  Method method = Method::ExactSpectral;
  /// Truncation order for TruncatedSeries.
  int series_order = 0;
  /// Sup-norm of the last retained order's density contribution.
  std::optional<double> tail_estimate;
  /// True when the orthogonal form of the series was used.
  bool orthogonal = false;
};

struct OracleOptions {
  std::size_t grid_n = kDefaultGridSize;
  bool with_densities = true;
  /// Post-selection probabilities below this are "strictly zero".
  double prob_floor = 1e-14;
  Thresholds thresholds;
};

/// The q and p axes used by both evolve_postselect and series_device_state
/// for this scenario.
struct WorkingAxes {
  Axis q;
  Axis p;
};
WorkingAxes working_axes(const Scenario& s, const OracleOptions& options = {});

MeasurementRecord evolve_postselect(const Scenario& s, const OracleOptions& options = {});

inline constexpr int kMaxSeriesOrder = 16;

MeasurementRecord series_device_state(const Scenario& s, int order,
                                      const OracleOptions& options = {});

/// Exact post-selection probability; returns exactly 0 below prob_floor.
double success_probability(const Scenario& s, const OracleOptions& options = {});

/// Interior strict local maxima of `density` whose value exceeds
/// rel_floor * max(density), as axis coordinates.
std::vector<double> local_maxima(const std::vector<double>& density, const Axis& axis,
                                 double rel_floor = 1e-8);

}  // namespace weakmeas
