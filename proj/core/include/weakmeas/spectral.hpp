#pragma once

// Uniform sampling axes and FFT-based operations on sampled wavefunctions.
//
// Fourier convention: phi~(p) = (2 pi)^{-1/2} \int phi(q) e^{-ipq} dq, so a
// translation phi(q - s) multiplies phi~ by e^{-ips} and the momentum
// operator acts as -i d/dq.

#include <cstddef>
#include <vector>

#include "weakmeas/qops.hpp"

namespace weakmeas {

using Samples = std::vector<Complex>;

/// Points min + i * step for i in [0, n).
struct Axis {
  double min = 0.0;
  double step = 1.0;
  std::size_t n = 0;

  double at(std::size_t i) const { return min + static_cast<double>(i) * step; }
  double max() const { return at(n - 1); }
  std::vector<double> points() const;

  /// Symmetric axis with `n` points, center at index n/2.
  static Axis centered(double center, double half_width, std::size_t n);
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

namespace spectral {

/// Angular wavenumbers of the DFT bins for spacing dq, in FFT order.
std::vector<double> wavenumbers(std::size_t n, double dq);

Samples forward(const Samples& x);
Samples inverse(const Samples& x);

/// p^power applied to the samples (periodic spectral differentiation). The
/// Nyquist bin is dropped for odd powers.
Samples momentum_power(const Samples& x, double dq, int power);

/// phi(q - shift) for band-limited periodic samples.
Samples translate(const Samples& x, double dq, double shift);

/// Continuous Fourier amplitude phi~(p) at every point of `p_axis`, by
/// trapezoidal quadrature over `q_axis`.
Samples direct_transform(const Samples& x, const Axis& q_axis, const Axis& p_axis);

/// <x|p^power|x> * dq normalization, i.e. sum_k p_k^power |X_k|^2 dq / n.
double momentum_expectation(const Samples& x, double dq, int power);

/// sum |x|^2 dq.
double norm_squared(const Samples& x, double dq);

}  // namespace spectral
}  // namespace weakmeas
