#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include <weakmeas/error.hpp>
#include <weakmeas_cli/commands.hpp>
#include <weakmeas_cli/scenario_io.hpp>

#include "random_scenarios.hpp"

using namespace weakmeas;
using namespace weakmeas::cli;

namespace {

const char* kSigmaZ = R"({
  "observable": [[[1,0],[0,0]],[[0,0],[-1,0]]],
  "pre_state": [[1,0],[0,0]],
  "post_projector": [[0.7071067811865476,0],[0.7071067811865476,0]],
  "g": 0.01,
  "pointer": {"delta_q": 1}
})";

std::string parse_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!bit_equal(a(i).real(), b(i).real()) || !bit_equal(a(i).imag(), b(i).imag())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto spec = parse_scenario(kSigmaZ);
  const Scenario s = spec.build();
  CHECK(s.g == 0.01);
  CHECK(s.pointer.is_gaussian());
  CHECK(overlap(s.post, s.pre) == doctest::Approx(0.5));
}

TEST_CASE("parse errors are anchored") {
  const std::string syntax = parse_message("{\n  \"g\": 0.1,\n  \"pointer\": {\"delta_q\" 1}\n}");
  CHECK(syntax.find("3:") != std::string::npos);

  std::string bad = kSigmaZ;
  const std::string row = "[[1,0],[0,0]],\n  \"post";
  bad.replace(bad.find(row), row.size(), "[[1,0],[0]],\n  \"post");
  CHECK(parse_message(bad).find("pre_state[1]") != std::string::npos);

  std::string missing = kSigmaZ;
  missing.replace(missing.find("\"g\""), 3, "\"h\"");
  CHECK(parse_message(missing).find("'h'") != std::string::npos);
}

TEST_CASE("serialization round-trips bit-exactly") {
  testing::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 3;
    ScenarioSpec spec;
    spec.observable = testing::random_hermitian(rng, dim) * std::exp(trial - 10.0);
    if (trial % 2) spec.pre = testing::random_vector(rng, dim);
    else spec.pre = testing::random_density(rng, dim);
    spec.post = testing::random_projector(rng, dim, 1);
    spec.g = std::sqrt(2.0) / (trial + 3);
    if (trial % 3 == 0) {
      const auto ptr = discretize(GaussianPointer{1.0}, Axis::centered(0.0, 12.0, 256));
      spec.pointer = ptr.as_grid();
    } else {
      spec.pointer = GaussianPointer{0.1 * trial + 1.0 / 3.0};
    }
    spec.options.grid_n = 2048;
    spec.options.orth_threshold = 1e-13;

    const auto back = parse_scenario(serialize(spec));
    CHECK(bit_equal(back.observable, spec.observable));
    CHECK(back.pre.index() == spec.pre.index());
    if (const auto* v = std::get_if<Vector>(&spec.pre)) {
      CHECK(bit_equal(Matrix(std::get<Vector>(back.pre)), Matrix(*v)));
    } else {
      CHECK(bit_equal(std::get<Matrix>(back.pre), std::get<Matrix>(spec.pre)));
    }
    CHECK(bit_equal(std::get<Matrix>(back.post), std::get<Matrix>(spec.post)));
    CHECK(bit_equal(back.g, spec.g));
    CHECK(serialize(back) == serialize(spec));
    CHECK(*back.options.grid_n == 2048);
  }
}

TEST_CASE("in-memory scenarios round-trip through JSON") {
  testing::Rng rng(6);
  const Scenario s = make_scenario(new_observable(testing::random_hermitian(rng, 3)),
                                   SystemState::from_matrix(testing::random_density(rng, 3)),
                                   PostSelection::from_matrix(testing::random_projector(rng, 3, 2)),
                                   0.125, gaussian(0.75));
  const Scenario back = parse_scenario(serialize(spec_of(s))).build();
  CHECK(bit_equal(back.observable.raw(), s.observable.raw()));
  CHECK(bit_equal(back.pre.matrix(), s.pre.matrix()));
  CHECK(bit_equal(back.post.matrix(), s.post.matrix()));
  CHECK(bit_equal(back.g, s.g));
}

TEST_CASE("predict command") {
  std::ostringstream out;
  cmd_predict(parse_scenario(kSigmaZ), RegimeFlag::Auto, {}, out);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["regime"] == "aav-compatible general");
  CHECK(doc["prediction"]["delta_q"].get<double>() == doctest::Approx(0.01));

  std::string orth = kSigmaZ;
  orth.replace(orth.find("[[1,0],[0,0]],[[0,0],[-1,0]]"), 28, "[[0,0],[1,0]],[[1,0],[0,0]]");
  orth.replace(orth.find("[[0.7071067811865476,0],[0.7071067811865476,0]]"), 47, "[[0,0],[1,0]]");
  std::ostringstream out2;
  cmd_predict(parse_scenario(orth), RegimeFlag::Auto, {}, out2);
  const auto doc2 = nlohmann::json::parse(out2.str());
  CHECK(doc2["regime"] == "orthogonal");
  CHECK(std::abs(doc2["prediction"]["delta_q"].get<double>()) < 1e-15);
  CHECK(doc2["margins"]["aav"].is_null());
}

TEST_CASE("figure 2 construction hits the weak-value targets") {
  for (Complex w : {Complex{0.2, 0.1}, Complex{0.0, 0.0}, Complex{-0.3, 0.7}}) {
    const auto sc = figure2_scenarios(w, 0.1, 1.0);
    CHECK(std::abs(orthogonal_weak_value(sc.orthogonal.observable, sc.orthogonal.pre, sc.orthogonal.post, 1, 0).value - w) < 1e-12);
    CHECK(std::abs(weak_value(sc.non_orthogonal.observable, sc.non_orthogonal.pre, sc.non_orthogonal.post).value - w) < 1e-12);
    CHECK(overlap(sc.orthogonal.post, sc.orthogonal.pre) < 1e-15);
  }
  try {
    figure2_scenarios({-0.5, 0.0}, 0.1, 1.0);
    FAIL("unrealizable target accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstructionFailure);
  }
}

TEST_CASE("stern-gerlach csv") {
  std::ostringstream out;
  cmd_sterngerlach({0.05, 0.1, 0.2, 0.4}, 400, out);
  std::istringstream in(out.str());
  std::string line;
  int comments = 0;
  int rows = 0;
  double peak3 = 0.0, peak3_alpha = 0.0;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      ++comments;
      continue;
    }
    if (line.rfind("alpha", 0) == 0) {
      CHECK(line == "alpha,outcome_lambda1,outcome_lambda2,outcome_lambda3,outcome_lambda4");
      continue;
    }
    ++rows;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    if (v[3] > peak3) {
      peak3 = v[3];
      peak3_alpha = v[0];
    }
    if (std::abs(v[0] - 0.1) < 1e-3) {
      CHECK(std::abs(v[1] / std::tan(0.05) - 1.0) < 5e-3);
      CHECK(std::abs(v[2] / std::tan(0.05) - 1.0) < 5e-3);
    }
  }
  CHECK(comments == 4);
  CHECK(rows == 401);
  CHECK(peak3 == doctest::Approx(5.02519).epsilon(1e-3));
  CHECK(peak3_alpha == doctest::Approx(2.9414).epsilon(5e-3));
}
