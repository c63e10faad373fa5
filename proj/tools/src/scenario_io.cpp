#include "weakmeas_cli/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace weakmeas::cli {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError("scenario key '" + path + "': " + what);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

Complex complex_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected a [re, im] pair");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

bool is_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number(); }

Vector vector_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_at(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty matrix");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].empty()) schema_error(row_path, "expected a row of [re, im] pairs");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) schema_error(row_path, "ragged matrix row");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_at(
          j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

StateSpec state_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a vector or matrix");
  if (is_pair(j[0])) return vector_at(j, path);
  return matrix_at(j, path);
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(key, "missing");
  return *it;
}

PointerSpec pointer_at(const json& j) {
  if (!j.is_object()) schema_error("pointer", "expected an object");
  if (j.contains("delta_q")) {
    return GaussianPointer{number(j["delta_q"], "pointer.delta_q")};
  }
  GridPointer grid;
  grid.q_min = number(require(j, "q_min"), "pointer.q_min");
  grid.dq = number(require(j, "dq"), "pointer.dq");
  const json& n = require(j, "n");
  if (!n.is_number_unsigned()) schema_error("pointer.n", "expected a positive integer");
  grid.n = n.get<std::size_t>();
  const json& branches = require(j, "branches");
  if (!branches.is_array() || branches.empty()) schema_error("pointer.branches", "expected a non-empty array");
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const std::string path = "pointer.branches[" + std::to_string(b) + "]";
    const json& br = branches[b];
    if (!br.is_object()) schema_error(path, "expected an object");
    PointerBranch branch;
    if (!br.contains("weight")) schema_error(path + ".weight", "missing");
    if (!br.contains("samples")) schema_error(path + ".samples", "missing");
    branch.weight = number(br["weight"], path + ".weight");
    const Vector v = vector_at(br["samples"], path + ".samples");
    branch.samples.assign(v.data(), v.data() + v.size());
    if (branch.samples.size() != grid.n) schema_error(path + ".samples", "length differs from n");
    grid.branches.push_back(std::move(branch));
  }
  return grid;
}

FileOptions options_at(const json& j) {
  FileOptions o;
  if (!j.is_object()) schema_error("options", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "grid_n") {
      if (!value.is_number_unsigned()) schema_error("options.grid_n", "expected a positive integer");
      o.grid_n = value.get<std::size_t>();
    } else if (key == "series_order") {
      if (!value.is_number_integer()) schema_error("options.series_order", "expected an integer");
      o.series_order = value.get<int>();
    } else if (key == "orth_threshold") {
      o.orth_threshold = number(value, "options.orth_threshold");
    } else {
      schema_error("options." + key, "unknown option");
    }
  }
  return o;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

SystemState build_pre(const StateSpec& s) {
  if (const auto* v = std::get_if<Vector>(&s)) return SystemState::from_vector(*v);
  return SystemState::from_matrix(std::get<Matrix>(s));
}

PostSelection build_post(const StateSpec& s) {
  if (const auto* v = std::get_if<Vector>(&s)) return PostSelection::from_vector(*v);
  return PostSelection::from_matrix(std::get<Matrix>(s));
}

json state_json(const StateSpec& s) {
  if (const auto* v = std::get_if<Vector>(&s)) return vector_json(*v);
  return matrix_json(std::get<Matrix>(s));
}

}  // namespace

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Scenario ScenarioSpec::build() const {
  PointerState ptr = std::holds_alternative<GaussianPointer>(pointer)
                         ? PointerState::gaussian(std::get<GaussianPointer>(pointer).delta_q)
                         : PointerState::grid(std::get<GridPointer>(pointer));
  return make_scenario(Observable::from_matrix(observable), build_pre(pre), build_post(post), g,
                       std::move(ptr));
}

ScenarioSpec parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("JSON syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario file must contain a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "observable" && key != "pre_state" && key != "post_projector" && key != "g" &&
        key != "pointer" && key != "options") {
      schema_error(key, "unknown key");
    }
  }

  ScenarioSpec spec;
  spec.observable = matrix_at(require(doc, "observable"), "observable");
  spec.pre = state_at(require(doc, "pre_state"), "pre_state");
  spec.post = state_at(require(doc, "post_projector"), "post_projector");
  spec.g = number(require(doc, "g"), "g");
  spec.pointer = pointer_at(require(doc, "pointer"));
  if (doc.contains("options")) spec.options = options_at(doc["options"]);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

json to_json(const ScenarioSpec& spec) {
  json doc;
  doc["observable"] = matrix_json(spec.observable);
  doc["pre_state"] = state_json(spec.pre);
  doc["post_projector"] = state_json(spec.post);
  doc["g"] = spec.g;
  if (const auto* gp = std::get_if<GaussianPointer>(&spec.pointer)) {
    doc["pointer"] = {{"delta_q", gp->delta_q}};
  } else {
    const auto& grid = std::get<GridPointer>(spec.pointer);
    json branches = json::array();
    for (const auto& b : grid.branches) {
      json samples = json::array();
      for (const Complex& z : b.samples) samples.push_back(complex_json(z));
      branches.push_back({{"weight", b.weight}, {"samples", std::move(samples)}});
    }
    doc["pointer"] = {{"q_min", grid.q_min}, {"dq", grid.dq}, {"n", grid.n},
                      {"branches", std::move(branches)}};
  }
  json opts = json::object();
  if (spec.options.grid_n) opts["grid_n"] = *spec.options.grid_n;
  if (spec.options.series_order) opts["series_order"] = *spec.options.series_order;
  if (spec.options.orth_threshold) opts["orth_threshold"] = *spec.options.orth_threshold;
  if (!opts.empty()) doc["options"] = std::move(opts);
  return doc;
}

std::string serialize(const ScenarioSpec& spec) { return to_json(spec).dump(2) + "\n"; }

ScenarioSpec spec_of(const Scenario& s) {
  ScenarioSpec spec;
  spec.observable = s.observable.raw();
  spec.pre = s.pre.matrix();
  spec.post = s.post.matrix();
  spec.g = s.g;
  if (s.pointer.is_gaussian()) {
    spec.pointer = s.pointer.as_gaussian();
  } else {
    spec.pointer = s.pointer.as_grid();
  }
  return spec;
}

}  // namespace weakmeas::cli
