#pragma once

// Finite-dimensional operator algebra for the measured system: observables
// normalized to unit operator norm, pre-selected density matrices and
// post-selection projectors.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace weakmeas {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPositivityTol = 1e-12;
inline constexpr double kIdempotentTol = 1e-10;

/// Gap below which two eigenvalues of a unit-norm observable are treated as
/// one degenerate eigenspace.
inline constexpr double kDegeneracyTol = 1e-9;

/// Hermitian observable rescaled to unit operator norm.
///
/// The raw matrix is kept so that a scenario can be serialized bit-exactly;
/// every computation uses `matrix()`, i.e. raw / scale. Callers that couple
/// the observable to a pointer with strength g must use g * scale().
class Observable {
 public:
  struct Eigenspace {
    double value;
    Matrix projector;
  };

  /// Validates Hermiticity, symmetrizes and diagonalizes.
  static Observable from_matrix(const Matrix& raw);

  /// Builds the observable from an explicit spectral decomposition. The given
  /// eigenvectors are kept as the working basis, which lets callers pick any
  /// orthonormal basis inside a degenerate eigenspace.
  static Observable from_spectrum(std::span<const double> eigenvalues,
                                  const Matrix& eigenvectors);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& raw() const { return raw_; }
  const Matrix& matrix() const { return matrix_; }
  double scale() const { return scale_; }

  /// Descending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Columns, ordered like `eigenvalues()`.
  const Matrix& eigenvectors() const { return eigenvectors_; }

  /// Distinct eigenvalues with the projector onto each eigenspace. The
  /// projectors are built from `eigenvectors()`.
  const std::vector<Eigenspace>& eigenspaces() const { return eigenspaces_; }

  /// A^k by repeated multiplication; k = 0 gives the identity.
  Matrix power(int k) const;

 private:
  Observable() = default;
  void build_eigenspaces();

  Matrix raw_;
  Matrix matrix_;
  double scale_ = 1.0;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
  std::vector<Eigenspace> eigenspaces_;
};

/// Same as Observable::from_matrix.
Observable new_observable(const Matrix& raw);

/// Pre-selected system state (density matrix).
class SystemState {
 public:
  struct Component {
    double weight;
    Vector state;
  };

  static SystemState from_matrix(const Matrix& rho);
  /// Normalizes `psi` and stores |psi><psi|.
  static SystemState from_vector(const Vector& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  /// Eigen-mixture with strictly positive weights, descending.
  const std::vector<Component>& mixture() const { return mixture_; }
  bool is_pure() const { return mixture_.size() == 1; }
  /// Only meaningful when is_pure().
  const Vector& pure_vector() const { return mixture_.front().state; }

 private:
  SystemState() = default;

  Matrix matrix_;
  std::vector<Component> mixture_;
};

/// Post-selection projector onto a subspace.
class PostSelection {
 public:
  static PostSelection from_matrix(const Matrix& projector);
  /// Normalizes `psi` and stores |psi><psi|.
  static PostSelection from_vector(const Vector& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  /// Orthonormal basis of the range, one column per vector.
  const Matrix& basis() const { return basis_; }
  bool is_pure() const { return rank() == 1; }
  Vector pure_vector() const { return basis_.col(0); }

 private:
  PostSelection() = default;

  Matrix matrix_;
  Matrix basis_;
};

/// tr(post * pre), clipped to [0, 1].
double overlap(const PostSelection& post, const SystemState& pre);

/// max |(AX - XA)_ij| <= tol.
bool commutes(const Observable& a, const Matrix& x, double tol);

/// max_ij |m_ij - conj(m_ji)|.
double hermiticity_defect(const Matrix& m);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Computational basis vector |index> of dimension dim.
Vector basis_vector(int dim, int index);

}  // namespace weakmeas
