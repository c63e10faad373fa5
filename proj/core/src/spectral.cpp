#include "weakmeas/spectral.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "weakmeas/error.hpp"

namespace weakmeas {

std::vector<double> Axis::points() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return out;
}

Axis Axis::centered(double center, double half_width, std::size_t n) {
  if (n < 2 || !(half_width > 0.0)) {
    throw Error(ErrorCode::InvalidGrid, "axis needs at least two points and positive width");
  }
  Axis axis;
  axis.step = 2.0 * half_width / static_cast<double>(n);
  axis.min = center - static_cast<double>(n / 2) * axis.step;
  axis.n = n;
  return axis;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace spectral {
namespace {

// kissfft plans are cached per object; one per thread keeps concurrent
// evaluation safe.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

std::vector<double> wavenumbers(std::size_t n, double dq) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dq);
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_index =
        j < (n + 1) / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    k[j] = base * signed_index;
  }
  return k;
}

Samples forward(const Samples& x) {
  Samples out;
  engine().fwd(out, x);
  return out;
}

Samples inverse(const Samples& x) {
  Samples out;
  engine().inv(out, x);
  return out;
}

Samples momentum_power(const Samples& x, double dq, int power) {
  if (power < 0) throw Error(ErrorCode::InvalidArgument, "negative momentum power");
  if (power == 0) return x;
  const std::size_t n = x.size();
  const auto k = wavenumbers(n, dq);
  Samples spectrum = forward(x);
  for (std::size_t j = 0; j < n; ++j) spectrum[j] *= std::pow(k[j], power);
  if (power % 2 == 1 && n % 2 == 0) spectrum[n / 2] = 0.0;
  return inverse(spectrum);
}

Samples translate(const Samples& x, double dq, double shift) {
  if (shift == 0.0) return x;
  const std::size_t n = x.size();
  const auto k = wavenumbers(n, dq);
  Samples spectrum = forward(x);
  for (std::size_t j = 0; j < n; ++j) spectrum[j] *= std::polar(1.0, -k[j] * shift);
  if (n % 2 == 0) spectrum[n / 2] = 0.0;
  return inverse(spectrum);
}

Samples direct_transform(const Samples& x, const Axis& q_axis, const Axis& p_axis) {
  if (x.size() != q_axis.n) throw Error(ErrorCode::DimensionMismatch, "samples do not match axis");
  Samples out(p_axis.n);
  const double prefactor = q_axis.step / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < p_axis.n; ++i) {
    const double p = p_axis.at(i);
    // e^{-ipq_k} by recurrence from q_min; phase error grows like k * eps.
    const Complex step = std::polar(1.0, -p * q_axis.step);
    Complex phase = std::polar(1.0, -p * q_axis.min);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < q_axis.n; ++k) {
      acc += x[k] * phase;
      phase *= step;
    }
    out[i] = prefactor * acc;
  }
  return out;
}

double momentum_expectation(const Samples& x, double dq, int power) {
  const std::size_t n = x.size();
  const auto k = wavenumbers(n, dq);
  const Samples spectrum = forward(x);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (power % 2 == 1 && n % 2 == 0 && j == n / 2) continue;
    acc += std::pow(k[j], power) * std::norm(spectrum[j]);
  }
  return acc * dq / static_cast<double>(n);
}

double norm_squared(const Samples& x, double dq) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc * dq;
}

}  // namespace spectral
}  // namespace weakmeas
