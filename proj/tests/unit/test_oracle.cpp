#include <doctest.h>

#include <cmath>
#include <numbers>

#include <weakmeas/error.hpp>
#include <weakmeas/oracle.hpp>
#include <weakmeas/predictor.hpp>

#include "joint_oracle.hpp"
#include "random_scenarios.hpp"

using namespace weakmeas;

namespace {

Vector plus_x() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

Scenario pure(const Matrix& a, const Vector& i, const Vector& f, double g, double dq = 1.0) {
  return make_scenario(new_observable(a), SystemState::from_vector(i), PostSelection::from_vector(f),
                       g, gaussian(dq));
}

OracleOptions moments_only() {
  OracleOptions o;
  o.with_densities = false;
  return o;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("eigenstate pre-selection translates the pointer rigidly") {
  testing::Rng rng(2);
  const auto a = new_observable(testing::random_hermitian(rng, 3));
  const Vector eig = a.eigenvectors().col(1);
  const Vector f = testing::random_vector(rng, 3);
  const Scenario s = make_scenario(a, SystemState::from_vector(eig), PostSelection::from_vector(f),
                                   0.3, gaussian(1.0));
  const auto r = evolve_postselect(s);
  CHECK(r.delta_q == doctest::Approx(s.coupling() * a.eigenvalues()(1)).epsilon(1e-12));
  CHECK(std::abs(r.delta_p) < 1e-12);
  CHECK(r.success_prob == doctest::Approx(std::norm(f.dot(eig))).epsilon(1e-12));
  CHECK(r.var_q_out == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-branch qubit example") {
  const auto r = evolve_postselect(pure(pauli::z(), basis_vector(2, 0), plus_x(), 0.01));
  CHECK(r.delta_q == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(r.success_prob == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(r.densities.has_value());
  CHECK(integrate(r.densities->q, r.densities->q_axis) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate(r.densities->p, r.densities->p_axis) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("orthogonal sigma_x variance ratio tends to 3") {
  const auto r = evolve_postselect(pure(pauli::x(), basis_vector(2, 0), basis_vector(2, 1), 0.02));
  CHECK(std::abs(r.delta_q) < 1e-12);
  CHECK(std::abs(r.var_q_out - 3.0) < 1e-3);
  CHECK(std::abs(r.var_p_out / 0.25 - 3.0) < 1e-3);
}

TEST_CASE("success probability") {
  const Vector z0 = basis_vector(2, 0);
  CHECK(success_probability(pure(pauli::x(), z0, z0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  const double n = success_probability(pure(pauli::x(), z0, basis_vector(2, 1), 0.02));
  CHECK(std::abs(n / 1e-4 - 1.0) < 5e-3);
  CHECK(success_probability(pure(pauli::z(), z0, basis_vector(2, 1), 0.02)) == 0.0);
  try {
    evolve_postselect(pure(pauli::z(), z0, basis_vector(2, 1), 0.02));
    FAIL("zero probability accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroPostSelectionProbability);
  }
}

TEST_CASE("exact oracle agrees with the matrix-exponential reference") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 2 + trial % 3;
    const Matrix a = testing::random_hermitian(rng, dim);
    Matrix rho_ok = testing::random_density(rng, dim);
    if (trial % 2 == 0) {
      const Vector v = testing::random_vector(rng, dim);
      rho_ok = v * v.adjoint();
    }
    const Matrix proj = testing::random_projector(rng, dim, 1 + trial % (dim - 1));
    const double g = 0.05 + 0.1 * trial;
    const double dq = 0.5 + 0.25 * (trial % 4);
    const Scenario s = make_scenario(new_observable(a), SystemState::from_matrix(rho_ok),
                                     PostSelection::from_matrix(proj), g, gaussian(dq));
    const auto r = evolve_postselect(s, moments_only());
    const auto ref = testing::joint_evolve(s.observable.matrix(), s.coupling(), rho_ok, proj, dq);
    CHECK(r.success_prob == doctest::Approx(ref.norm).epsilon(1e-10));
    CHECK(std::abs(r.delta_q - ref.mean_q) < 1e-10);
    CHECK(std::abs(r.delta_p - ref.mean_p) < 1e-10);
    CHECK(r.var_q_out == doctest::Approx(ref.var_q).epsilon(1e-9));
    CHECK(r.var_p_out == doctest::Approx(ref.var_p).epsilon(1e-9));
  }
}

TEST_CASE("grid pointers reproduce the analytic gaussian") {
  testing::Rng rng(8);
  const Matrix a = testing::random_hermitian(rng, 2);
  const Vector i = testing::random_vector(rng, 2);
  const Vector f = testing::random_vector(rng, 2);
  const Scenario analytic = pure(a, i, f, 0.4);
  const Scenario grid = make_scenario(analytic.observable, analytic.pre, analytic.post, 0.4,
                                      discretize(GaussianPointer{1.0}, Axis::centered(0.0, 12.0, 1024)));
  const auto ra = evolve_postselect(analytic, moments_only());
  const auto rg = evolve_postselect(grid, moments_only());
  CHECK(std::abs(ra.delta_q - rg.delta_q) < 1e-10);
  CHECK(std::abs(ra.delta_p - rg.delta_p) < 1e-10);
  CHECK(std::abs(ra.success_prob - rg.success_prob) < 1e-10);
}

TEST_CASE("results do not depend on the basis inside degenerate eigenspaces") {
  testing::Rng rng(13);
  const std::vector<double> values{1.0, 1.0, -0.5, -0.5};
  const Matrix v = testing::random_unitary(rng, 4);
  Matrix rotated = v;
  for (int block : {0, 2}) {
    rotated.middleCols(block, 2) = v.middleCols(block, 2) * testing::random_unitary(rng, 2);
  }
  const auto a1 = Observable::from_spectrum(values, v);
  const auto a2 = Observable::from_spectrum(values, rotated);
  const auto pre = SystemState::from_matrix(testing::random_density(rng, 4));
  const auto post = PostSelection::from_matrix(testing::random_projector(rng, 4, 2));
  const auto r1 = evolve_postselect(make_scenario(a1, pre, post, 0.3, gaussian(1.0)));
  const auto r2 = evolve_postselect(make_scenario(a2, pre, post, 0.3, gaussian(1.0)));
  CHECK(std::abs(r1.delta_q - r2.delta_q) < 1e-10);
  CHECK(std::abs(r1.delta_p - r2.delta_p) < 1e-10);
  CHECK(std::abs(r1.success_prob - r2.success_prob) < 1e-10);
  CHECK(sup_diff(r1.densities->q, r2.densities->q) < 1e-10);
}

TEST_CASE("truncated series") {
  const Scenario s = pure(pauli::z(), basis_vector(2, 0), plus_x(), 0.05);
  const auto zero = series_device_state(s, 0);
  CHECK(std::abs(zero.delta_q) < 1e-14);
  CHECK(std::abs(zero.delta_p) < 1e-14);
  CHECK(zero.method == Method::TruncatedSeries);

  testing::Rng rng(99);
  const Scenario r = pure(testing::random_hermitian(rng, 2), testing::random_vector(rng, 2),
                          testing::random_vector(rng, 2), 0.1);
  const auto exact = evolve_postselect(r);
  const auto series = series_device_state(r, 12);
  CHECK(sup_diff(exact.densities->q, series.densities->q) < 1e-8);
  CHECK(sup_diff(exact.densities->p, series.densities->p) < 1e-8);
  CHECK(std::abs(exact.delta_q - series.delta_q) < 1e-10);
  CHECK(*series.tail_estimate < 1e-11);

  const Scenario idem = pure(0.5 * (pauli::identity() + pauli::x()), basis_vector(2, 0),
                             basis_vector(2, 1), 0.02);
  const auto o = series_device_state(idem, 6);
  CHECK(o.orthogonal);
  CHECK(std::abs(o.delta_q / 0.02 - 0.5) < 1e-4);

  try {
    series_device_state(pure(pauli::z(), basis_vector(2, 0), plus_x(), 2.0), 8);
    FAIL("strong coupling accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WeakInteractionViolated);
  }
  try {
    series_device_state(pure(pauli::z(), basis_vector(2, 0), basis_vector(2, 1), 0.02), 6);
    FAIL("vanishing g^2 term accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotApplicable);
  }
  CHECK_THROWS_AS(series_device_state(s, 17), Error);
}

TEST_CASE("series diverges for a pointer with a fast momentum component") {
  // A 1e-3 admixture at p = 160 keeps the order-4 margin small while
  // (g p)^n / n! still grows through n = 8.
  const Axis axis = Axis::centered(0.0, 12.0, 4096);
  PointerBranch branch;
  double norm = 0.0;
  for (std::size_t i = 0; i < axis.n; ++i) {
    const double q = axis.at(i);
    const double env = std::exp(-q * q / 4.0);
    branch.samples.push_back(env * (1.0 + 1e-3 * std::polar(1.0, 160.0 * q)));
    norm += std::norm(branch.samples.back()) * axis.step;
  }
  for (auto& x : branch.samples) x /= std::sqrt(norm);
  const auto ptr = PointerState::grid({axis.min, axis.step, axis.n, {branch}});
  const Scenario s = make_scenario(new_observable(pauli::z()), SystemState::from_vector(basis_vector(2, 0)),
                                   PostSelection::from_vector(plus_x()), 0.05, ptr);
  REQUIRE(weak_interaction_margin(0.05, ptr, 4) < 0.5);
  try {
    series_device_state(s, 6);
    FAIL("growing series accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeriesDiverging);
  }
}

TEST_CASE("local maxima") {
  const Axis axis{0.0, 1.0, 7};
  CHECK(local_maxima({0, 1, 0, 2, 0, 3, 0}, axis).size() == 3);
  CHECK(local_maxima({0, 1e-12, 0, 2, 0, 1e-12, 0}, axis).size() == 1);
}
