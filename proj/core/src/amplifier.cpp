#include "weakmeas/amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

double pick(Objective objective, double dq, double dp, double coupling) {
  switch (objective) {
    case Objective::DeltaQ: return dq;
    case Objective::DeltaP: return dp;
    case Objective::MeasuredValue: return dq / coupling;
  }
  return dq;
}

SweepRecord evaluate_point(const ScenarioFamily& family, double x, Objective objective,
                           Engine engine, const EngineOptions& options) {
  SweepRecord rec;
  rec.parameter = x;
  const Scenario s = family(x);
  rec.weak_margin = weak_interaction_margin(s.coupling(), s.pointer, options.predict.margin_order);
  if (s.pure()) {
    const double m = aav_margin(s.observable, s.pre, s.post, s.coupling(), s.pointer,
                                options.predict.margin_order);
    if (std::isfinite(m)) rec.aav_margin = m;
  }
  try {
    if (engine == Engine::Exact) {
      OracleOptions o = options.oracle;
      o.with_densities = false;
      const MeasurementRecord r = evolve_postselect(s, o);
      rec.outcome = pick(objective, r.delta_q, r.delta_p, s.coupling());
      rec.success_prob = r.success_prob;
    } else {
      const ShiftPrediction p = predict_auto(s, options.predict);
      rec.outcome = pick(objective, p.delta_q, p.delta_p, s.coupling());
      rec.success_prob = p.success_prob;
    }
  } catch (const Error&) {
    rec.outcome.reset();
  }
  return rec;
}

}  // namespace

double evaluate(const Scenario& s, Objective objective, Engine engine,
                const EngineOptions& options) {
  if (engine == Engine::Exact) {
    OracleOptions o = options.oracle;
    o.with_densities = false;
    const MeasurementRecord r = evolve_postselect(s, o);
    return pick(objective, r.delta_q, r.delta_p, s.coupling());
  }
  const ShiftPrediction p = predict_auto(s, options.predict);
  return pick(objective, p.delta_q, p.delta_p, s.coupling());
}

std::vector<SweepRecord> sweep(const ScenarioFamily& family, std::span<const double> grid,
                               Objective objective, Engine engine,
                               const EngineOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sweep grid must be strictly increasing");
    }
  }

  std::vector<SweepRecord> out(grid.size());
  const std::size_t workers =
      std::min<std::size_t>(grid.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out[i] = evaluate_point(family, grid[i], objective, engine, options);
    }
    return out;
  }

  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < grid.size(); i += workers) {
          out[i] = evaluate_point(family, grid[i], objective, engine, options);
        }
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

OptimumReport find_optimum(const ScenarioFamily& family, std::pair<double, double> bracket,
                           Objective objective, Engine engine, double tol,
                           const EngineOptions& options) {
  const auto [lo, hi] = bracket;
  if (!(lo < hi)) throw Error(ErrorCode::InvalidBracket, "bracket needs lo < hi");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");

  auto f = [&](double x) { return evaluate(family(x), objective, engine, options); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (b - a > tol && iterations < 200) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++iterations;
  }
  double x = fc > fd ? c : d;
  double fx = std::max(fc, fd);

  // Golden section stalls near sqrt(eps) because the objective is flat at the
  // maximum; finish with symmetric parabolic steps at a fixed offset.
  const double h = std::max(1e-5, 10.0 * tol);
  for (int k = 0; k < 2; ++k) {
    if (x - h <= lo || x + h >= hi) break;
    const double fl = f(x - h);
    const double fr = f(x + h);
    const double curv = fl - 2.0 * fx + fr;
    if (!(curv < 0.0)) break;
    const double step = 0.5 * h * (fl - fr) / curv;
    if (std::abs(step) > h) break;
    const double xn = x + step;
    const double fn = f(xn);
    ++iterations;
    if (fn < fx - 1e-12 * std::abs(fx)) break;
    x = xn;
    fx = std::max(fx, fn);
  }

  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo > fx || fhi > fx) {
    throw Error(ErrorCode::NotUnimodal, "a bracket end beats the interior optimum");
  }
  return {x, fx, iterations, bracket};
}

ScenarioFamily sg_family(double lambda, double g) {
  (void)SGParams::make(0.5, lambda);
  return [lambda, g](double alpha) { return sg_scenario(alpha, lambda, g); };
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << "parameter,outcome,success_prob,weak_margin\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << num(r.parameter) << ',' << (r.outcome ? num(*r.outcome) : std::string()) << ','
        << num(r.success_prob) << ',' << num(r.weak_margin) << '\n';
  }
}

}  // namespace weakmeas
