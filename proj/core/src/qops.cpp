#include "weakmeas/qops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix");
  }
}

void require_hermitian(const Matrix& m, const char* what) {
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NonHermitian,
                std::string(what) + " is not Hermitian (max |M - M^dagger| = " +
                    std::to_string(defect) + ")");
  }
}

Matrix symmetrized(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Observable Observable::from_matrix(const Matrix& raw) {
  require_square(raw, "observable");
  require_hermitian(raw, "observable");

  const Matrix h = symmetrized(raw);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "observable eigendecomposition failed");
  }
  const Eigen::VectorXd& ascending = solver.eigenvalues();
  const double norm = ascending.cwiseAbs().maxCoeff();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::ZeroOperator, "observable has zero operator norm");
  }

  Observable obs;
  obs.raw_ = raw;
  obs.scale_ = norm;
  obs.matrix_ = h / norm;
  obs.eigenvalues_ = ascending.reverse() / norm;
  obs.eigenvectors_ = solver.eigenvectors().rowwise().reverse();
  obs.build_eigenspaces();
  return obs;
}

Observable Observable::from_spectrum(std::span<const double> eigenvalues,
                                     const Matrix& eigenvectors) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  if (n == 0 || eigenvectors.rows() != n || eigenvectors.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "spectrum and eigenvector matrix sizes disagree");
  }
  const Matrix gram = eigenvectors.adjoint() * eigenvectors;
  if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw Error(ErrorCode::InvalidArgument, "eigenvectors are not orthonormal");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return eigenvalues[static_cast<std::size_t>(a)] >
           eigenvalues[static_cast<std::size_t>(b)];
  });

  double norm = 0.0;
  for (double v : eigenvalues) norm = std::max(norm, std::abs(v));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::ZeroOperator, "observable has zero operator norm");
  }

  Observable obs;
  obs.eigenvalues_.resize(n);
  obs.eigenvectors_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    obs.eigenvalues_(i) = eigenvalues[static_cast<std::size_t>(src)] / norm;
    obs.eigenvectors_.col(i) = eigenvectors.col(src);
  }
  const Eigen::VectorXd scaled = obs.eigenvalues_ * norm;
  obs.raw_ = obs.eigenvectors_ * scaled.cast<Complex>().asDiagonal() *
             obs.eigenvectors_.adjoint();
  obs.scale_ = norm;
  obs.matrix_ = symmetrized(obs.raw_) / norm;
  obs.build_eigenspaces();
  return obs;
}

void Observable::build_eigenspaces() {
  eigenspaces_.clear();
  const auto n = eigenvalues_.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && eigenvalues_(end - 1) - eigenvalues_(end) <= kDegeneracyTol) ++end;
    const auto block = eigenvectors_.middleCols(start, end - start);
    Eigenspace space;
    space.value = eigenvalues_.segment(start, end - start).mean();
    space.projector = block * block.adjoint();
    eigenspaces_.push_back(std::move(space));
    start = end;
  }
}

Matrix Observable::power(int k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative operator power");
  Matrix result = Matrix::Identity(dim(), dim());
  for (int i = 0; i < k; ++i) result = result * matrix_;
  return result;
}

Observable new_observable(const Matrix& raw) { return Observable::from_matrix(raw); }

SystemState SystemState::from_matrix(const Matrix& rho) {
  require_square(rho, "pre-selected state");
  require_hermitian(rho, "pre-selected state");
  const double trace = rho.trace().real();
  if (!(std::abs(trace - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::InvalidState,
                "pre-selected state must have unit trace (got " + std::to_string(trace) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(rho));
  const Eigen::VectorXd& w = solver.eigenvalues();
  if (w.minCoeff() < -kPositivityTol) {
    throw Error(ErrorCode::InvalidState, "pre-selected state has a negative eigenvalue");
  }

  SystemState state;
  state.matrix_ = rho;
  for (Eigen::Index i = w.size() - 1; i >= 0; --i) {
    if (w(i) > kPositivityTol) state.mixture_.push_back({w(i), solver.eigenvectors().col(i)});
  }
  return state;
}

SystemState SystemState::from_vector(const Vector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0)) {
    throw Error(ErrorCode::InvalidState, "pre-selected vector must be nonzero");
  }
  const Vector unit = psi / norm;
  SystemState state;
  state.matrix_ = unit * unit.adjoint();
  state.mixture_.push_back({1.0, unit});
  return state;
}

PostSelection PostSelection::from_matrix(const Matrix& projector) {
  require_square(projector, "post-selection");
  require_hermitian(projector, "post-selection");
  if ((projector * projector - projector).cwiseAbs().maxCoeff() > kIdempotentTol) {
    throw Error(ErrorCode::InvalidProjector, "post-selection is not idempotent");
  }
  const double trace = projector.trace().real();
  const double rank = std::round(trace);
  if (rank < 1.0 || std::abs(trace - rank) > kIdempotentTol) {
    throw Error(ErrorCode::InvalidProjector, "post-selection trace is not a positive integer");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(projector));
  const auto r = static_cast<Eigen::Index>(rank);
  PostSelection post;
  post.matrix_ = projector;
  // Ascending eigenvalues: the range is spanned by the last r columns.
  post.basis_ = solver.eigenvectors().rightCols(r).rowwise().reverse();
  return post;
}

PostSelection PostSelection::from_vector(const Vector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || !(norm > 0.0)) {
    throw Error(ErrorCode::InvalidProjector, "post-selected vector must be nonzero");
  }
  const Vector unit = psi / norm;
  PostSelection post;
  post.matrix_ = unit * unit.adjoint();
  post.basis_ = unit;
  return post;
}

double overlap(const PostSelection& post, const SystemState& pre) {
  if (post.dim() != pre.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "post-selection and state dimensions differ");
  }
  const double value = (post.matrix() * pre.matrix()).trace().real();
  return std::clamp(value, 0.0, 1.0);
}

bool commutes(const Observable& a, const Matrix& x, double tol) {
  if (x.rows() != a.dim() || x.cols() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator operands have different dimensions");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "commutator tolerance must be positive");
  const Matrix& m = a.matrix();
  return (m * x - x * m).cwiseAbs().maxCoeff() <= tol;
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Vector basis_vector(int dim, int index) {
  if (index < 0 || index >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace weakmeas
