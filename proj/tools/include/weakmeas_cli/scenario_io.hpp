#pragma once

// Scenario files: JSON with keys observable, pre_state, post_projector, g,
// pointer and an optional options block. Matrices are row-major nested arrays
// of [re, im] pairs; a state may also be given as a 1-D array of pairs.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "weakmeas/scenario.hpp"

namespace weakmeas::cli {

/// Malformed input. Syntax errors carry "line:col"; schema errors name the key path.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateSpec = std::variant<Vector, Matrix>;
using PointerSpec = std::variant<GaussianPointer, GridPointer>;

struct FileOptions {
  std::optional<std::size_t> grid_n;
  std::optional<int> series_order;
  std::optional<double> orth_threshold;
};

/// The file contents as written, so that serialization round-trips exactly.
struct ScenarioSpec {
  Matrix observable;
  StateSpec pre;
  StateSpec post;
  double g = 0.0;
  PointerSpec pointer;
  FileOptions options;

  /// Validates and builds the in-memory scenario (throws weakmeas::Error).
  Scenario build() const;
};

ScenarioSpec parse_scenario(std::string_view text);
ScenarioSpec load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioSpec& spec);
std::string serialize(const ScenarioSpec& spec);

/// Spec of an in-memory scenario using its raw observable, state matrices
/// and pointer data.
ScenarioSpec spec_of(const Scenario& s);

nlohmann::json complex_json(Complex z);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json vector_json(const Vector& v);

}  // namespace weakmeas::cli
