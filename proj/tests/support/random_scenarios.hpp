#pragma once

#include <random>

#include <weakmeas/qops.hpp>

namespace weakmeas::testing {

using Rng = std::mt19937_64;

inline Complex gauss_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline Matrix random_hermitian(Rng& rng, int dim) {
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = gauss_complex(rng);
  return 0.5 * (m + m.adjoint());
}

inline Vector random_vector(Rng& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss_complex(rng);
  return v / v.norm();
}

/// Full-rank density matrix.
inline Matrix random_density(Rng& rng, int dim) {
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = gauss_complex(rng);
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

/// Orthogonal projector of the given rank.
inline Matrix random_projector(Rng& rng, int dim, int rank) {
  Matrix m(dim, rank);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < rank; ++c) m(r, c) = gauss_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, rank);
  Matrix p = q * q.adjoint();
  return 0.5 * (p + p.adjoint());
}

inline Matrix random_unitary(Rng& rng, int dim) {
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = gauss_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

}  // namespace weakmeas::testing
