#include <doctest.h>

#include <weakmeas/error.hpp>
#include <weakmeas/qops.hpp>

#include "random_scenarios.hpp"

using namespace weakmeas;

namespace {

Vector plus_x() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected weakmeas::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("observable normalization") {
  SUBCASE("sigma_z is already unit norm") {
    const auto a = new_observable(pauli::z());
    CHECK(a.scale() == doctest::Approx(1.0));
    CHECK(a.eigenvalues()(0) == doctest::Approx(1.0));
    CHECK(a.eigenvalues()(1) == doctest::Approx(-1.0));
  }
  SUBCASE("5 sigma_x rescales to sigma_x") {
    const auto a = new_observable(5.0 * pauli::x());
    CHECK(a.scale() == doctest::Approx(5.0));
    CHECK((a.matrix() - pauli::x()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("(I + sigma_x)/2 is an idempotent projector") {
    const auto a = new_observable(0.5 * (pauli::identity() + pauli::x()));
    CHECK(a.scale() == doctest::Approx(1.0));
    CHECK(a.eigenvalues()(0) == doctest::Approx(1.0));
    CHECK(std::abs(a.eigenvalues()(1)) < 1e-14);
    CHECK((a.matrix() * a.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("renormalizing is idempotent") {
    testing::Rng rng(11);
    const auto a = new_observable(testing::random_hermitian(rng, 4));
    const auto b = new_observable(a.matrix());
    CHECK(b.scale() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((b.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("observable rejects bad input") {
  Matrix m = pauli::x();
  m(0, 1) += 1e-6;
  CHECK(code_of([&] { new_observable(m); }) == ErrorCode::NonHermitian);
  CHECK(code_of([] { new_observable(Matrix::Zero(2, 2)); }) == ErrorCode::ZeroOperator);
}

TEST_CASE("spectral reconstruction of random Hermitian matrices") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 5;
    const auto a = new_observable(testing::random_hermitian(rng, dim));
    const Matrix& v = a.eigenvectors();
    CHECK((v.adjoint() * v - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
    Matrix rebuilt = Matrix::Zero(dim, dim);
    for (const auto& space : a.eigenspaces()) rebuilt += space.value * space.projector;
    CHECK((rebuilt - a.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(a.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("degenerate eigenvalues share one eigenspace") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  d(2, 2) = -1.0;
  const auto a = new_observable(d);
  REQUIRE(a.eigenspaces().size() == 2);
  CHECK(a.eigenspaces()[0].projector.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("overlap") {
  const Vector z0 = basis_vector(2, 0);
  const Vector z1 = basis_vector(2, 1);
  CHECK(overlap(PostSelection::from_vector(z0), SystemState::from_vector(z0)) == doctest::Approx(1.0));
  CHECK(overlap(PostSelection::from_vector(z1), SystemState::from_vector(z0)) == 0.0);
  CHECK(overlap(PostSelection::from_vector(plus_x()), SystemState::from_vector(z0)) ==
        doctest::Approx(0.5));

  testing::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vector a = testing::random_vector(rng, 3);
    const Vector b = testing::random_vector(rng, 3);
    const double expected = std::norm(b.dot(a));
    CHECK(overlap(PostSelection::from_vector(b), SystemState::from_vector(a)) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(code_of([] {
          overlap(PostSelection::from_vector(basis_vector(3, 0)),
                  SystemState::from_vector(basis_vector(2, 0)));
        }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("commutes") {
  const auto z = new_observable(pauli::z());
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  CHECK(commutes(z, p0, 1e-12));
  CHECK_FALSE(commutes(z, pauli::x(), 1e-12));
  CHECK_FALSE(commutes(new_observable(0.5 * (pauli::identity() + pauli::x())), p0, 1e-12));
}

TEST_CASE("states and projectors are validated") {
  Matrix rho = Matrix::Identity(2, 2);
  CHECK(code_of([&] { SystemState::from_matrix(rho); }) == ErrorCode::InvalidState);
  rho *= 0.5;
  const auto mixed = SystemState::from_matrix(rho);
  CHECK_FALSE(mixed.is_pure());
  CHECK(mixed.mixture().size() == 2);

  Matrix not_projector = 0.7 * Matrix::Identity(2, 2);
  CHECK(code_of([&] { PostSelection::from_matrix(not_projector); }) == ErrorCode::InvalidProjector);

  testing::Rng rng(5);
  const auto post = PostSelection::from_matrix(testing::random_projector(rng, 4, 2));
  CHECK(post.rank() == 2);
  CHECK_FALSE(post.is_pure());
}
