#include "weakmeas_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "weakmeas/error.hpp"
#include "weakmeas/oracle.hpp"
#include "weakmeas/predictor.hpp"

namespace weakmeas::cli {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Thresholds thresholds_of(const ScenarioSpec& spec) {
  Thresholds t;
  if (spec.options.orth_threshold) t.orth = *spec.options.orth_threshold;
  return t;
}

OracleOptions oracle_options(const ScenarioSpec& spec, const GlobalFlags& flags) {
  OracleOptions o;
  if (spec.options.grid_n) o.grid_n = *spec.options.grid_n;
  if (flags.grid_n) o.grid_n = *flags.grid_n;
  o.thresholds = thresholds_of(spec);
  return o;
}

json prediction_json(const ShiftPrediction& p) {
  json j;
  j["regime"] = std::string(regime_name(p.regime));
  j["delta_q"] = p.delta_q;
  j["delta_p"] = p.delta_p;
  j["var_q_out"] = optional_json(p.var_q_out);
  j["var_p_out"] = optional_json(p.var_p_out);
  j["denominator_c"] = optional_json(p.denominator_c);
  j["weak_value"] = complex_json(p.weak_value);
  j["success_prob"] = p.success_prob;
  if (p.peaks) {
    j["peaks"] = {{"q", {p.peaks->q[0], p.peaks->q[1]}}, {"p", {p.peaks->p[0], p.peaks->p[1]}}};
  } else {
    j["peaks"] = nullptr;
  }
  j["warnings"] = p.warnings;
  return j;
}

json record_json(const MeasurementRecord& r) {
  json j;
  j["method"] = r.method == Method::ExactSpectral ? "exact-spectral" : "truncated-series";
  if (r.method == Method::TruncatedSeries) {
    j["series_order"] = r.series_order;
    j["tail_estimate"] = optional_json(r.tail_estimate);
  }
  j["success_prob"] = r.success_prob;
  j["delta_q"] = r.delta_q;
  j["delta_p"] = r.delta_p;
  j["var_q_out"] = r.var_q_out;
  j["var_p_out"] = r.var_p_out;
  return j;
}

void write_densities_csv(const Densities& d, std::ostream& out) {
  out << "coord,q_density,p_coord,p_density\n";
  for (std::size_t i = 0; i < d.q_axis.n; ++i) {
    out << fmt17(d.q_axis.at(i)) << ',' << fmt17(d.q[i]) << ',';
    if (i < d.p_axis.n) out << fmt17(d.p_axis.at(i)) << ',' << fmt17(d.p[i]);
    else out << ',';
    out << '\n';
  }
}

Vector normalized(const Vector& v) { return v / v.norm(); }

}  // namespace

std::string error_json(const std::string& code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}}.dump(2) + "\n";
}

void cmd_predict(const ScenarioSpec& spec, RegimeFlag regime, const GlobalFlags& flags,
                 std::ostream& out) {
  (void)flags;
  const Scenario s = spec.build();
  PredictOptions options;
  options.thresholds = thresholds_of(spec);

  ShiftPrediction p;
  switch (regime) {
    case RegimeFlag::Auto: p = predict_auto(s, options); break;
    case RegimeFlag::Aav: p = predict_aav(s, options); break;
    case RegimeFlag::General: p = predict_general(s, options); break;
    case RegimeFlag::Orthogonal: p = predict_orthogonal(s, options); break;
  }

  std::string label;
  switch (p.regime) {
    case Regime::Aav: label = "aav"; break;
    case Regime::GeneralNonOrthogonal:
      label = (p.aav_margin && *p.aav_margin < 0.1) ? "aav-compatible general" : "general";
      break;
    case Regime::Orthogonal:
    case Regime::OrthogonalGaussian: label = "orthogonal"; break;
  }

  json doc;
  doc["regime"] = label;
  doc["overlap"] = overlap(s.post, s.pre);
  doc["prediction"] = prediction_json(p);
  doc["margins"] = {{"weak_interaction", p.weak_margin}, {"aav", optional_json(p.aav_margin)}};
  out << doc.dump(2) << '\n';
}

void cmd_exact(const ScenarioSpec& spec, const std::optional<std::string>& densities_path,
               const GlobalFlags& flags, std::ostream& out) {
  const Scenario s = spec.build();
  OracleOptions options = oracle_options(spec, flags);
  options.with_densities = densities_path.has_value();
  const MeasurementRecord rec = evolve_postselect(s, options);

  json doc = record_json(rec);
  doc["grid_n"] = rec.densities ? rec.densities->q_axis.n : working_axes(s, options).q.n;
  std::optional<int> order = flags.series_order ? flags.series_order : spec.options.series_order;
  if (order) {
    OracleOptions so = options;
    so.with_densities = false;
    doc["series"] = record_json(series_device_state(s, *order, so));
  }
  if (densities_path) {
    std::ofstream csv(*densities_path, std::ios::binary);
    if (!csv) throw ParseError("cannot write '" + *densities_path + "'");
    write_densities_csv(*rec.densities, csv);
  }
  out << doc.dump(2) << '\n';
}

void cmd_sterngerlach(const std::vector<double>& lambdas, int steps, std::ostream& out) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "no lambda values given");
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  for (double l : lambdas) (void)SGParams::make(0.0, l);

  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const SgOptimum closed = sg_optimum(lambdas[i]);
    const OptimumReport found =
        find_optimum(sg_family(lambdas[i]), {std::numbers::pi / 2.0, std::numbers::pi - 1e-3},
                     Objective::MeasuredValue, Engine::Predicted, 1e-10);
    out << "# lambda" << i + 1 << '=' << fmt17(lambdas[i]) << " alpha_opt=" << fmt17(closed.alpha_opt)
        << " max_outcome=" << fmt17(closed.max_outcome)
        << " search_alpha=" << fmt17(found.parameter_opt)
        << " search_max=" << fmt17(found.outcome_max) << '\n';
  }
  out << "alpha";
  for (std::size_t i = 0; i < lambdas.size(); ++i) out << ",outcome_lambda" << i + 1;
  out << '\n';
  for (int k = 0; k <= steps; ++k) {
    const double alpha = std::numbers::pi * k / steps;
    out << fmt17(alpha);
    for (double l : lambdas) out << ',' << fmt17(stern_gerlach_outcome(SGParams::make(alpha, l)));
    out << '\n';
  }
}

Figure2Scenarios figure2_scenarios(Complex w, double g, double delta_q) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(2, 2) = -1.0;
  const Observable obs = Observable::from_matrix(a);

  // Products u_k = conj(f_k) i_k with sum_k u_k a_k^n fixed by the target.
  auto states = [&](const std::array<Complex, 3>& u) {
    Vector pre(3);
    Vector post(3);
    for (int k = 0; k < 3; ++k) {
      const double r = std::sqrt(std::abs(u[k]));
      pre(k) = r;
      post(k) = r > 0.0 ? std::conj(u[k]) / r : Complex{};
    }
    if (!(pre.norm() > 0.0) || !(post.norm() > 0.0)) {
      throw Error(ErrorCode::ConstructionFailure, "weak-value target cannot be realized");
    }
    return std::pair{normalized(pre), normalized(post)};
  };
  auto check = [&](Complex got) {
    if (!(std::abs(got - w) <= 1e-10 * std::max(1.0, std::abs(w)))) {
      throw Error(ErrorCode::ConstructionFailure, "constructed scenario misses the weak-value target");
    }
  };

  const Complex one{1.0, 0.0};
  const Complex d_orth = one + 2.0 * w;
  const Complex d_non = one + w;
  if (std::abs(d_orth) < 1e-12 || std::abs(d_non) < 1e-12) {
    throw Error(ErrorCode::ConstructionFailure, "weak-value target cannot be realized");
  }

  const Complex u3o = -(one - 2.0 * w) / d_orth;
  const auto [oi, of] = states({one, -one - u3o, u3o});
  const Complex u3n = (one - 2.0 * w) / d_non;
  const auto [ni, nf] = states({one, one, u3n});

  try {
    Figure2Scenarios out{
        make_scenario(obs, SystemState::from_vector(oi), PostSelection::from_vector(of), g,
                      PointerState::gaussian(delta_q)),
        make_scenario(obs, SystemState::from_vector(ni), PostSelection::from_vector(nf), g,
                      PointerState::gaussian(delta_q))};
    check(orthogonal_weak_value(out.orthogonal.observable, out.orthogonal.pre, out.orthogonal.post, 1, 0).value);
    check(weak_value(out.non_orthogonal.observable, out.non_orthogonal.pre, out.non_orthogonal.post).value);
    return out;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConstructionFailure) throw;
    throw Error(ErrorCode::ConstructionFailure, std::string("constructed scenario is invalid: ") + e.what());
  }
}

void cmd_figure2(Complex w, double g, double delta_q, const GlobalFlags& flags,
                 std::ostream& out) {
  if (!(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "--g must be positive");
  const Figure2Scenarios sc = figure2_scenarios(w, g, delta_q);
  OracleOptions options;
  if (flags.grid_n) options.grid_n = *flags.grid_n;
  const MeasurementRecord orth = evolve_postselect(sc.orthogonal, options);
  const MeasurementRecord non = evolve_postselect(sc.non_orthogonal, options);
  const Densities& od = *orth.densities;
  const Densities& nd = *non.densities;

  const PointerState& ptr = sc.orthogonal.pointer;
  const Samples q0 = sample_branch(ptr, 0, od.q_axis, 0.0);
  const Samples p0 = momentum_amplitude(ptr, 0, od.p_axis);
  const double dq = delta_q;
  const double dp = ptr.delta_p();

  const ShiftPrediction pred = predict_orthogonal_gaussian(sc.orthogonal);
  out << "# wv=" << fmt17(w.real()) << ',' << fmt17(w.imag()) << " g=" << fmt17(g)
      << " delta_q=" << fmt17(dq) << '\n';
  out << "# orthogonal_success_prob=" << fmt17(orth.success_prob)
      << " nonorthogonal_success_prob=" << fmt17(non.success_prob) << '\n';
  out << "# predicted_q_peaks_over_delta_q=" << fmt17(pred.peaks->q[0] / dq) << ','
      << fmt17(pred.peaks->q[1] / dq) << '\n';
  out << "q_over_delta_q,initial,orthogonal,nonorthogonal,p_over_delta_p,initial_p,orthogonal_p,"
         "nonorthogonal_p\n";
  for (std::size_t i = 0; i < od.q_axis.n; ++i) {
    out << fmt17(od.q_axis.at(i) / dq) << ',' << fmt17(std::norm(q0[i]) * dq) << ','
        << fmt17(od.q[i] * dq) << ',' << fmt17(nd.q[i] * dq) << ',' << fmt17(od.p_axis.at(i) / dp)
        << ',' << fmt17(std::norm(p0[i]) * dp) << ',' << fmt17(od.p[i] * dp) << ','
        << fmt17(nd.p[i] * dp) << '\n';
  }
}

void cmd_sweep(double lambda, Engine engine, Objective objective, int steps,
               const GlobalFlags& flags, std::ostream& out) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  std::vector<double> grid;
  for (int k = 0; k <= steps; ++k) grid.push_back(std::numbers::pi * k / steps);
  EngineOptions options;
  if (flags.grid_n) options.oracle.grid_n = *flags.grid_n;
  const auto records = sweep(sg_family(lambda), grid, objective, engine, options);
  out << "# family=stern-gerlach lambda=" << fmt17(lambda) << '\n';
  write_sweep_csv(out, records);
}

}  // namespace weakmeas::cli
