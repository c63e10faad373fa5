#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weakmeas/error.hpp"
#include "weakmeas_cli/commands.hpp"

namespace {

using namespace weakmeas;
using namespace weakmeas::cli;

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  in >> re;
  if (!in) throw ParseError("--wv expects re,im");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ParseError("--wv expects re,im");
  }
  return {re, im};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakmeas: pre/post-selected pointer measurement simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::string out_path;
  std::size_t grid_n = 0;
  int series_order = -1;
  app.add_option("--grid-n", grid_n, "Pointer grid size (power of two)");
  app.add_option("--series-order", series_order, "Also evaluate the truncated series to this order");
  app.add_option("--out", out_path, "Write primary output here instead of stdout");

  std::string scenario_path;
  std::string regime = "auto";
  auto* predict = app.add_subcommand("predict", "Closed-form shift prediction as JSON");
  predict->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  predict->add_option("--regime", regime, "auto|aav|general|orthogonal")
      ->check(CLI::IsMember({"auto", "aav", "general", "orthogonal"}));

  std::string densities_path;
  auto* exact = app.add_subcommand("exact", "Exact evolution and post-selection as JSON");
  exact->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  exact->add_option("--densities", densities_path, "CSV file for output densities");

  std::vector<double> lambdas{0.05, 0.1, 0.2, 0.4};
  int steps = 400;
  auto* sg = app.add_subcommand("sterngerlach", "Stern-Gerlach outcome curves as CSV");
  sg->add_option("--lambdas", lambdas, "Comma-separated coupling strengths")->delimiter(',');
  sg->add_option("--steps", steps, "Number of alpha intervals on [0, pi]");

  std::string wv = "0.2,0.1";
  double g = 0.0;
  double delta_q = 1.0;
  auto* fig2 = app.add_subcommand("figure2", "Orthogonal vs non-orthogonal densities as CSV");
  fig2->add_option("--wv", wv, "Target weak value re,im");
  fig2->add_option("--g", g, "Coupling")->required();
  fig2->add_option("--delta_q", delta_q, "Pointer width");

  double lambda = 0.2;
  std::string engine = "predicted";
  std::string objective = "measured";
  int sweep_steps = 200;
  auto* sw = app.add_subcommand("sweep", "Stern-Gerlach alpha sweep as CSV");
  sw->add_option("--lambda", lambda, "Coupling strength in (0, 1)");
  sw->add_option("--engine", engine, "predicted|exact")->check(CLI::IsMember({"predicted", "exact"}));
  sw->add_option("--objective", objective, "measured|delta_q|delta_p")
      ->check(CLI::IsMember({"measured", "delta_q", "delta_p"}));
  sw->add_option("--steps", sweep_steps, "Number of alpha intervals on [0, pi]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }
  if (grid_n > 0) flags.grid_n = grid_n;
  if (series_order >= 0) flags.series_order = series_order;

  std::ostringstream buffer;
  try {
    if (predict->parsed()) {
      RegimeFlag flag = RegimeFlag::Auto;
      if (regime == "aav") flag = RegimeFlag::Aav;
      if (regime == "general") flag = RegimeFlag::General;
      if (regime == "orthogonal") flag = RegimeFlag::Orthogonal;
      cmd_predict(load_scenario(scenario_path), flag, flags, buffer);
    } else if (exact->parsed()) {
      std::optional<std::string> dens;
      if (!densities_path.empty()) dens = densities_path;
      cmd_exact(load_scenario(scenario_path), dens, flags, buffer);
    } else if (sg->parsed()) {
      cmd_sterngerlach(lambdas, steps, buffer);
    } else if (fig2->parsed()) {
      cmd_figure2(parse_complex(wv), g, delta_q, flags, buffer);
    } else if (sw->parsed()) {
      const Engine e = engine == "exact" ? Engine::Exact : Engine::Predicted;
      Objective o = Objective::MeasuredValue;
      if (objective == "delta_q") o = Objective::DeltaQ;
      if (objective == "delta_p") o = Objective::DeltaP;
      cmd_sweep(lambda, e, o, sweep_steps, flags, buffer);
    }
  } catch (const ParseError& e) {
    std::cerr << "weakmeas: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "weakmeas: " << code_name(e.code()) << ": " << e.what() << '\n';
    std::cout << error_json(std::string(code_name(e.code())), e.what());
    return is_regime_error(e.code()) ? kExitRegime : kExitParse;
  }

  if (out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "weakmeas: cannot write '" << out_path << "'\n";
      return kExitParse;
    }
    file << buffer.str();
  }
  return kExitOk;
}
