#include "weakmeas/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

constexpr double kCoverageSigmas = 8.0;
constexpr double kPaxisSigmas = 12.0;
constexpr std::size_t kMaxGridSize = std::size_t{1} << 22;

double gaussian_amplitude(double x, double sigma) {
  const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  return norm * std::exp(-x * x / (4.0 * sigma * sigma));
}

// (n - 1)!! for even n, i.e. the Gaussian central moment <x^n> / sigma^n.
double double_factorial_odd(int n) {
  double out = 1.0;
  for (int k = n - 1; k > 1; k -= 2) out *= k;
  return out;
}

double gaussian_central_moment(int n, double variance) {
  if (n % 2 == 1) return 0.0;
  return double_factorial_odd(n) * std::pow(variance, n / 2);
}

BranchStats grid_branch_stats(const Samples& phi, const Axis& axis) {
  BranchStats s;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < axis.n; ++k) {
    const double q = axis.at(k);
    const double d = std::norm(phi[k]) * axis.step;
    m1 += q * d;
    m2 += q * q * d;
  }
  s.mean_q = m1;
  s.sigma_q = std::sqrt(std::max(0.0, m2 - m1 * m1));
  s.mean_p = spectral::momentum_expectation(phi, axis.step, 1);
  const double p2 = spectral::momentum_expectation(phi, axis.step, 2);
  s.sigma_p = std::sqrt(std::max(0.0, p2 - s.mean_p * s.mean_p));
  return s;
}

double weighted_sum_q(const Samples& a, const Samples& b, const Axis& axis, int q_power) {
  // Re sum conj(a) q^k b dq
  double acc = 0.0;
  for (std::size_t k = 0; k < axis.n; ++k) {
    acc += std::pow(axis.at(k), q_power) * (std::conj(a[k]) * b[k]).real();
  }
  return acc * axis.step;
}

double grid_branch_moment(const Samples& phi, const Axis& axis, MomentSpec spec) {
  const double dq = axis.step;
  switch (spec.kind) {
    case MomentKind::Pn:
      return spectral::momentum_expectation(phi, dq, spec.order);
    case MomentKind::P3:
      return spectral::momentum_expectation(phi, dq, 3);
    case MomentKind::Qn:
      return weighted_sum_q(phi, phi, axis, spec.order);
    case MomentKind::AnticommQP: {
      const Samples p_phi = spectral::momentum_power(phi, dq, 1);
      return 2.0 * weighted_sum_q(phi, p_phi, axis, 1);
    }
    case MomentKind::PQP: {
      const Samples p_phi = spectral::momentum_power(phi, dq, 1);
      return weighted_sum_q(p_phi, p_phi, axis, 1);
    }
    case MomentKind::PQ2P: {
      const Samples p_phi = spectral::momentum_power(phi, dq, 1);
      return weighted_sum_q(p_phi, p_phi, axis, 2);
    }
    case MomentKind::PBraceP: {
      const Samples p_phi = spectral::momentum_power(phi, dq, 1);
      const Samples p2_phi = spectral::momentum_power(phi, dq, 2);
      return 2.0 * weighted_sum_q(p_phi, p2_phi, axis, 1);
    }
  }
  return 0.0;
}

double gaussian_moment(const GaussianPointer& g, MomentSpec spec) {
  switch (spec.kind) {
    case MomentKind::Pn:
      return gaussian_central_moment(spec.order, g.var_p());
    case MomentKind::Qn:
      return gaussian_central_moment(spec.order, g.var_q());
    case MomentKind::P3:
    case MomentKind::AnticommQP:
    case MomentKind::PQP:
    case MomentKind::PBraceP:
      return 0.0;
    case MomentKind::PQ2P:
      return 3.0 * g.var_q() * g.var_p();
  }
  return 0.0;
}

}  // namespace

PointerState PointerState::gaussian(double delta_q) {
  if (!(delta_q > 0.0) || !std::isfinite(delta_q)) {
    throw Error(ErrorCode::NonPositiveWidth, "Gaussian pointer width must be positive");
  }
  PointerState state;
  GaussianPointer g{delta_q};
  state.data_ = g;
  state.stats_.push_back({0.0, delta_q, 0.0, g.delta_p()});
  return state;
}

PointerState PointerState::grid(GridPointer grid) {
  if (!(grid.dq > 0.0) || !std::isfinite(grid.dq) || !std::isfinite(grid.q_min)) {
    throw Error(ErrorCode::InvalidGrid, "grid spacing must be positive and finite");
  }
  if (!is_power_of_two(grid.n) || grid.n < 16) {
    throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 16");
  }
  if (grid.branches.empty()) throw Error(ErrorCode::InvalidGrid, "grid pointer has no branches");

  double total = 0.0;
  for (const auto& b : grid.branches) {
    if (!(b.weight >= 0.0)) throw Error(ErrorCode::InvalidGrid, "branch weights must be >= 0");
    if (b.samples.size() != grid.n) {
      throw Error(ErrorCode::InvalidGrid, "branch sample count does not match n");
    }
    total += b.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidGrid, "branch weights must sum to 1");
  }

  PointerState state;
  const Axis axis = grid.axis();
  for (std::size_t j = 0; j < grid.branches.size(); ++j) {
    const auto& phi = grid.branches[j].samples;
    const double norm = spectral::norm_squared(phi, grid.dq);
    if (std::abs(norm - 1.0) > 1e-10) {
      throw Error(ErrorCode::InvalidGrid,
                  "branch " + std::to_string(j) + " is not normalized (norm^2 = " +
                      std::to_string(norm) + ")");
    }
    BranchStats s = grid_branch_stats(phi, axis);
    if (s.mean_q - kCoverageSigmas * s.sigma_q < axis.min ||
        s.mean_q + kCoverageSigmas * s.sigma_q > axis.max()) {
      throw Error(ErrorCode::InvalidGrid,
                  "grid does not cover 8 standard deviations of branch " + std::to_string(j));
    }
    state.stats_.push_back(s);
  }
  state.data_ = std::move(grid);
  return state;
}

double PointerState::branch_weight(std::size_t j) const {
  if (is_gaussian()) return 1.0;
  return as_grid().branches.at(j).weight;
}

double PointerState::mean_q() const {
  double m = 0.0;
  for (std::size_t j = 0; j < branch_count(); ++j) m += branch_weight(j) * stats_[j].mean_q;
  return m;
}

double PointerState::mean_p() const {
  double m = 0.0;
  for (std::size_t j = 0; j < branch_count(); ++j) m += branch_weight(j) * stats_[j].mean_p;
  return m;
}

double PointerState::var_q() const {
  double second = 0.0;
  for (std::size_t j = 0; j < branch_count(); ++j) {
    const auto& s = stats_[j];
    second += branch_weight(j) * (s.sigma_q * s.sigma_q + s.mean_q * s.mean_q);
  }
  const double m = mean_q();
  return second - m * m;
}

double PointerState::var_p() const {
  double second = 0.0;
  for (std::size_t j = 0; j < branch_count(); ++j) {
    const auto& s = stats_[j];
    second += branch_weight(j) * (s.sigma_p * s.sigma_p + s.mean_p * s.mean_p);
  }
  const double m = mean_p();
  return second - m * m;
}

double PointerState::delta_p() const { return std::sqrt(std::max(0.0, var_p())); }

double PointerState::max_sigma_q() const {
  double out = 0.0;
  for (const auto& s : stats_) out = std::max(out, s.sigma_q);
  return out;
}

double PointerState::max_sigma_p() const {
  double out = 0.0;
  for (const auto& s : stats_) out = std::max(out, s.sigma_p);
  return out;
}

PointerState discretize(const GaussianPointer& g, const Axis& axis) {
  GridPointer grid{axis.min, axis.step, axis.n, {}};
  PointerBranch branch;
  branch.weight = 1.0;
  branch.samples.resize(axis.n);
  for (std::size_t k = 0; k < axis.n; ++k) {
    branch.samples[k] = gaussian_amplitude(axis.at(k), g.delta_q);
  }
  grid.branches.push_back(std::move(branch));
  return PointerState::grid(std::move(grid));
}

double moment(const PointerState& state, MomentSpec spec) {
  if ((spec.kind == MomentKind::Pn || spec.kind == MomentKind::Qn) && spec.order < 0) {
    throw Error(ErrorCode::UnsupportedOrder, "moment order must be non-negative");
  }
  if (state.is_gaussian()) return gaussian_moment(state.as_gaussian(), spec);

  if ((spec.kind == MomentKind::Pn || spec.kind == MomentKind::Qn) &&
      spec.order > kMaxGridMomentOrder) {
    throw Error(ErrorCode::UnsupportedOrder,
                "grid moments are limited to order " + std::to_string(kMaxGridMomentOrder));
  }
  const auto& grid = state.as_grid();
  const Axis axis = grid.axis();
  double acc = 0.0;
  for (const auto& b : grid.branches) {
    acc += b.weight * grid_branch_moment(b.samples, axis, spec);
  }
  return acc;
}

Axis working_q_axis(const PointerState& state, double max_shift, std::size_t grid_n) {
  max_shift = std::abs(max_shift);
  if (state.is_gaussian()) {
    if (!is_power_of_two(grid_n) || grid_n < 16) {
      throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 16");
    }
    const double dq = state.as_gaussian().delta_q;
    const double half = 10.0 * std::max(dq, max_shift) + max_shift;
    return Axis::centered(0.0, half, grid_n);
  }

  const auto& grid = state.as_grid();
  const Axis base = grid.axis();
  double lo = base.min;
  double hi = base.max();
  for (std::size_t j = 0; j < state.branch_count(); ++j) {
    const auto& s = state.branch_stats(j);
    lo = std::min(lo, s.mean_q - kCoverageSigmas * s.sigma_q - max_shift);
    hi = std::max(hi, s.mean_q + kCoverageSigmas * s.sigma_q + max_shift);
  }
  if (lo >= base.min && hi <= base.max()) return base;

  const double margin = max_shift + kCoverageSigmas * state.max_sigma_q();
  const auto pad = static_cast<std::size_t>(std::ceil(margin / grid.dq));
  const std::size_t n = next_power_of_two(grid.n + 2 * pad);
  if (n > kMaxGridSize) {
    throw Error(ErrorCode::GridTooSmall, "grid extension would exceed 2^22 points");
  }
  const std::size_t left = (n - grid.n) / 2;
  return Axis{grid.q_min - static_cast<double>(left) * grid.dq, grid.dq, n};
}

Axis default_p_axis(const PointerState& state, std::size_t n) {
  return Axis::centered(state.mean_p(), kPaxisSigmas * state.max_sigma_p(), n);
}

Samples sample_branch(const PointerState& state, std::size_t j, const Axis& axis, double shift) {
  if (state.is_gaussian()) {
    const double sigma = state.as_gaussian().delta_q;
    Samples out(axis.n);
    for (std::size_t k = 0; k < axis.n; ++k) out[k] = gaussian_amplitude(axis.at(k) - shift, sigma);
    return out;
  }

  const auto& grid = state.as_grid();
  if (std::abs(axis.step - grid.dq) > 1e-12 * grid.dq) {
    throw Error(ErrorCode::InvalidGrid, "sampling axis step differs from the pointer grid");
  }
  const double offset_real = (grid.q_min - axis.min) / grid.dq;
  const auto offset = static_cast<long long>(std::llround(offset_real));
  if (std::abs(offset_real - static_cast<double>(offset)) > 1e-6 || offset < 0 ||
      static_cast<std::size_t>(offset) + grid.n > axis.n) {
    throw Error(ErrorCode::InvalidGrid, "sampling axis is not aligned with the pointer grid");
  }
  Samples padded(axis.n, Complex{0.0, 0.0});
  const auto& phi = grid.branches.at(j).samples;
  std::copy(phi.begin(), phi.end(), padded.begin() + offset);
  return spectral::translate(padded, axis.step, shift);
}

Samples momentum_amplitude(const PointerState& state, std::size_t j, const Axis& p_axis) {
  if (state.is_gaussian()) {
    const double sigma_p = state.as_gaussian().delta_p();
    Samples out(p_axis.n);
    for (std::size_t k = 0; k < p_axis.n; ++k) out[k] = gaussian_amplitude(p_axis.at(k), sigma_p);
    return out;
  }
  const auto& grid = state.as_grid();
  return spectral::direct_transform(grid.branches.at(j).samples, grid.axis(), p_axis);
}

Densities densities(const PointerState& state, std::size_t grid_n) {
  Densities out;
  out.q_axis = working_q_axis(state, 0.0, grid_n);
  out.p_axis = default_p_axis(state, out.q_axis.n);
  out.q.assign(out.q_axis.n, 0.0);
  out.p.assign(out.p_axis.n, 0.0);
  for (std::size_t j = 0; j < state.branch_count(); ++j) {
    const double w = state.branch_weight(j);
    const Samples phi = sample_branch(state, j, out.q_axis, 0.0);
    const Samples phi_p = momentum_amplitude(state, j, out.p_axis);
    for (std::size_t k = 0; k < out.q_axis.n; ++k) out.q[k] += w * std::norm(phi[k]);
    for (std::size_t k = 0; k < out.p_axis.n; ++k) out.p[k] += w * std::norm(phi_p[k]);
  }
  return out;
}

double integrate(const std::vector<double>& density, const Axis& axis) {
  double acc = 0.0;
  for (double d : density) acc += d;
  return acc * axis.step;
}

}  // namespace weakmeas
