#pragma once

// Measuring-device (pointer) states and the moments that enter the shift
// formulas. A pointer is either the analytic zero-mean minimum-uncertainty
// Gaussian, or a convex mixture of pure branches sampled on a uniform grid.

#include <cstddef>
#include <variant>
#include <vector>

#include "weakmeas/spectral.hpp"

namespace weakmeas {

struct GaussianPointer {
  double delta_q = 1.0;

  double delta_p() const { return 0.5 / delta_q; }
  double var_q() const { return delta_q * delta_q; }
  double var_p() const { return delta_p() * delta_p(); }
};

struct PointerBranch {
  double weight = 1.0;
  Samples samples;
};

struct GridPointer {
  double q_min = 0.0;
  double dq = 1.0;
  std::size_t n = 0;
  std::vector<PointerBranch> branches;

  Axis axis() const { return Axis{q_min, dq, n}; }
};

/// Position/momentum mean and spread of one pure branch.
struct BranchStats {
  double mean_q = 0.0;
  double sigma_q = 0.0;
  double mean_p = 0.0;
  double sigma_p = 0.0;
};

class PointerState {
 public:
  /// Throws NonPositiveWidth unless delta_q > 0.
  static PointerState gaussian(double delta_q);
  /// Validates weights, branch normalization, power-of-two size and that
  /// every branch fits in the grid with 8 standard deviations to spare.
  static PointerState grid(GridPointer grid);

  bool is_gaussian() const { return std::holds_alternative<GaussianPointer>(data_); }
  const GaussianPointer& as_gaussian() const { return std::get<GaussianPointer>(data_); }
  const GridPointer& as_grid() const { return std::get<GridPointer>(data_); }

  std::size_t branch_count() const { return stats_.size(); }
  double branch_weight(std::size_t j) const;
  const BranchStats& branch_stats(std::size_t j) const { return stats_.at(j); }

  double mean_q() const;
  double mean_p() const;
  double var_q() const;
  double var_p() const;
  double delta_p() const;
  double max_sigma_q() const;
  double max_sigma_p() const;

 private:
  PointerState() = default;

  std::variant<GaussianPointer, GridPointer> data_;
  std::vector<BranchStats> stats_;
};

inline PointerState gaussian(double delta_q) { return PointerState::gaussian(delta_q); }

/// Discretizes the analytic Gaussian on `axis` as a single-branch grid pointer.
PointerState discretize(const GaussianPointer& g, const Axis& axis);

enum class MomentKind {
  Pn,          // <p^n>
  Qn,          // <q^n>
  AnticommQP,  // <{q, p}>
  PQP,         // <p q p>
  PQ2P,        // <p q^2 p>
  PBraceP,     // <p {q, p} p>
  P3,          // <p^3>
};

struct MomentSpec {
  MomentKind kind = MomentKind::Pn;
  int order = 0;

  static MomentSpec p(int n) { return {MomentKind::Pn, n}; }
  static MomentSpec q(int n) { return {MomentKind::Qn, n}; }
  static MomentSpec anticomm_qp() { return {MomentKind::AnticommQP, 0}; }
  static MomentSpec pqp() { return {MomentKind::PQP, 0}; }
  static MomentSpec pq2p() { return {MomentKind::PQ2P, 0}; }
  static MomentSpec p_brace_p() { return {MomentKind::PBraceP, 0}; }
  static MomentSpec p3() { return {MomentKind::P3, 0}; }
};

/// Highest p^n / q^n order evaluated by quadrature on grid pointers.
inline constexpr int kMaxGridMomentOrder = 8;

/// Expectation in the initial pointer state. Closed forms for the Gaussian,
/// spectral quadrature for grids.
double moment(const PointerState& state, MomentSpec spec);

inline constexpr std::size_t kDefaultGridSize = 4096;

/// q axis large enough for every branch translated by up to +-max_shift.
/// Gaussian: centered, half-width 10 max(delta_q, max_shift) + max_shift.
/// Grid: the pointer's own grid, zero-padded to a larger power of two when a
/// shifted branch (mean +- 8 sigma) would leave it.
Axis working_q_axis(const PointerState& state, double max_shift, std::size_t grid_n);

/// Centered on <p>, half-width 12 max(sigma_p), `n` points.
Axis default_p_axis(const PointerState& state, std::size_t n);

/// phi_j(q - shift) sampled on `axis`. For grid pointers `axis` must share the
/// pointer's step and be aligned with its grid (as produced by
/// working_q_axis).
Samples sample_branch(const PointerState& state, std::size_t j, const Axis& axis, double shift);

/// phi~_j(p) on `p_axis`.
Samples momentum_amplitude(const PointerState& state, std::size_t j, const Axis& p_axis);

struct Densities {
  Axis q_axis;
  std::vector<double> q;
  Axis p_axis;
  std::vector<double> p;
};

/// Position and momentum probability densities of the initial pointer. The
/// Gaussian is rendered on its default working grid of `grid_n` points.
Densities densities(const PointerState& state, std::size_t grid_n = kDefaultGridSize);

/// sum density * step.
double integrate(const std::vector<double>& density, const Axis& axis);

}  // namespace weakmeas
