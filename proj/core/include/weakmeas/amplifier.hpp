#pragma once

// Overlap sweeps and the maximum-amplification search at fixed coupling.

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "weakmeas/oracle.hpp"
#include "weakmeas/predictor.hpp"

namespace weakmeas {

enum class Objective {
  DeltaQ,
  DeltaP,
  /// delta_q / coupling: the pointer shift in units of the eigenvalue scale.
  MeasuredValue,
};

enum class Engine {
  Exact,
  /// predict_auto.
  Predicted,
};

using ScenarioFamily = std::function<Scenario(double)>;

struct SweepRecord {
  double parameter = 0.0;
  /// Null when the point has zero post-selection probability or otherwise
  /// fails with a weakmeas::Error.
  std::optional<double> outcome;
  double success_prob = 0.0;
  double weak_margin = 0.0;
  std::optional<double> aav_margin;
};

struct EngineOptions {
  OracleOptions oracle;
  PredictOptions predict;
};

/// Objective value of one scenario.
double evaluate(const Scenario& s, Objective objective, Engine engine,
                const EngineOptions& options = {});

/// One record per grid point, in grid order. `grid` must be non-empty and
/// strictly increasing.
std::vector<SweepRecord> sweep(const ScenarioFamily& family, std::span<const double> grid,
                               Objective objective, Engine engine,
                               const EngineOptions& options = {});

struct OptimumReport {
  double parameter_opt = 0.0;
  double outcome_max = 0.0;
  int iterations = 0;
  std::pair<double, double> bracket;
};

/// Golden-section maximization on [lo, hi], polished by parabolic steps.
OptimumReport find_optimum(const ScenarioFamily& family, std::pair<double, double> bracket,
                           Objective objective, Engine engine, double tol,
                           const EngineOptions& options = {});

/// alpha -> sg_scenario(alpha, lambda, g).
ScenarioFamily sg_family(double lambda, double g = 1.0);

/// parameter,outcome,success_prob,weak_margin with 12 significant digits.
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

}  // namespace weakmeas
