#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "weakmeas/amplifier.hpp"
#include "weakmeas_cli/scenario_io.hpp"

namespace weakmeas::cli {

/// Flags shared by every subcommand.
struct GlobalFlags {
  std::optional<std::size_t> grid_n;
  std::optional<int> series_order;
};

enum class RegimeFlag { Auto, Aav, General, Orthogonal };

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitRegime = 2;

/// Each command writes its primary output to `out` and throws on failure;
/// run_guarded maps exceptions to exit codes.
void cmd_predict(const ScenarioSpec& spec, RegimeFlag regime, const GlobalFlags& flags,
                 std::ostream& out);

void cmd_exact(const ScenarioSpec& spec, const std::optional<std::string>& densities_path,
               const GlobalFlags& flags, std::ostream& out);

void cmd_sterngerlach(const std::vector<double>& lambdas, int steps, std::ostream& out);

struct Figure2Scenarios {
  Scenario orthogonal;
  Scenario non_orthogonal;
};

/// Qutrit scenarios with A = diag(1, 0, -1) whose A_ow (resp. A_w) equals w.
/// Throws ConstructionFailure when w cannot be realized.
Figure2Scenarios figure2_scenarios(Complex w, double g, double delta_q);

void cmd_figure2(Complex w, double g, double delta_q, const GlobalFlags& flags,
                 std::ostream& out);

void cmd_sweep(double lambda, Engine engine, Objective objective, int steps,
               const GlobalFlags& flags, std::ostream& out);

/// JSON error object {"error": {"code", "message"}}.
std::string error_json(const std::string& code, const std::string& message);

}  // namespace weakmeas::cli
