#include <benchmark/benchmark.h>

#include <vector>

#include <weakmeas/amplifier.hpp>
#include <weakmeas/oracle.hpp>
#include <weakmeas/predictor.hpp>

using namespace weakmeas;

namespace {

Scenario qubit(double g) {
  Vector i(2), f(2);
  i << 1.0, 0.0;
  f << std::sqrt(0.5), std::polar(std::sqrt(0.5), 0.9);
  Matrix a = pauli::z() + 0.3 * pauli::x();
  return make_scenario(new_observable(a), SystemState::from_vector(i), PostSelection::from_vector(f), g,
                       gaussian(1.0));
}

}  // namespace

static void BM_EvolvePostselect(benchmark::State& state) {
  const Scenario s = qubit(0.05);
  OracleOptions o;
  o.grid_n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_postselect(s, o));
}
BENCHMARK(BM_EvolvePostselect)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_SeriesDeviceState(benchmark::State& state) {
  const Scenario s = qubit(0.02);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(series_device_state(s, order));
}
BENCHMARK(BM_SeriesDeviceState)->Arg(4)->Arg(8)->Arg(12);

static void BM_PredictGeneral(benchmark::State& state) {
  const Scenario s = qubit(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(predict_general(s));
}
BENCHMARK(BM_PredictGeneral);

static void BM_SternGerlachSweep(benchmark::State& state) {
  const auto family = sg_family(0.2);
  std::vector<double> grid(200);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 0.01 + 3.1 * static_cast<double>(k) / 200.0;
  const auto engine = state.range(0) ? Engine::Exact : Engine::Predicted;
  for (auto _ : state) benchmark::DoNotOptimize(sweep(family, grid, Objective::MeasuredValue, engine));
}
BENCHMARK(BM_SternGerlachSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
