#include "weakmeas/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "weakmeas/error.hpp"

namespace weakmeas {
namespace {

// Spectral coefficients below this fraction of the peak are treated as
// round-off and dropped before applying high powers of p.
constexpr double kSpectrumFloor = 1e-13;

struct Accumulator {
  double norm = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<double> q_density;
  std::vector<double> p_density;
};

double max_abs_eigenvalue(const Observable& a) {
  double m = 0.0;
  for (const auto& space : a.eigenspaces()) m = std::max(m, std::abs(space.value));
  return m;
}

void add_q_moments(Accumulator& acc, const std::vector<double>& density, const Axis& axis,
                   double weight) {
  for (std::size_t i = 0; i < axis.n; ++i) {
    const double q = axis.at(i);
    const double d = weight * density[i] * axis.step;
    acc.q1 += q * d;
    acc.q2 += q * q * d;
  }
}

MeasurementRecord finish(Accumulator& acc, const Scenario& s, const WorkingAxes& axes,
                         bool with_densities, Method method) {
  const double n = acc.norm;
  MeasurementRecord rec;
  rec.method = method;
  rec.success_prob = n;
  const double mean_q = acc.q1 / n;
  const double mean_p = acc.p1 / n;
  rec.delta_q = mean_q - s.pointer.mean_q();
  rec.delta_p = mean_p - s.pointer.mean_p();
  rec.var_q_out = std::max(0.0, acc.q2 / n - mean_q * mean_q);
  rec.var_p_out = std::max(0.0, acc.p2 / n - mean_p * mean_p);
  if (with_densities) {
    Densities d;
    d.q_axis = axes.q;
    d.p_axis = axes.p;
    d.q = std::move(acc.q_density);
    d.p = std::move(acc.p_density);
    for (double& v : d.q) v /= n;
    for (double& v : d.p) v /= n;
    rec.densities = std::move(d);
  }
  return rec;
}

struct ExactOutcome {
  Accumulator acc;
  WorkingAxes axes;
};

ExactOutcome run_exact(const Scenario& s, const OracleOptions& options, bool moments,
                       bool with_densities) {
  ExactOutcome out;
  out.axes = working_axes(s, options);
  const Axis& qa = out.axes.q;
  const Axis& pa = out.axes.p;
  const double g = s.coupling();
  const auto& spaces = s.observable.eigenspaces();
  const Matrix& post = s.post.basis();

  Accumulator& acc = out.acc;
  if (with_densities) {
    acc.q_density.assign(qa.n, 0.0);
    acc.p_density.assign(pa.n, 0.0);
  }

  std::vector<double> branch_q(qa.n);
  Samples phi(qa.n);
  Samples phit_out(pa.n);
  std::vector<Samples> shifted(spaces.size());
  std::vector<Samples> phases;
  if (with_densities) {
    phases.assign(spaces.size(), Samples(pa.n));
    for (std::size_t a = 0; a < spaces.size(); ++a) {
      for (std::size_t i = 0; i < pa.n; ++i) {
        phases[a][i] = std::polar(1.0, -g * spaces[a].value * pa.at(i));
      }
    }
  }

  for (std::size_t j = 0; j < s.pointer.branch_count(); ++j) {
    const double v = s.pointer.branch_weight(j);
    for (std::size_t a = 0; a < spaces.size(); ++a) {
      shifted[a] = sample_branch(s.pointer, j, qa, g * spaces[a].value);
    }
    Samples phit;
    if (with_densities) phit = momentum_amplitude(s.pointer, j, pa);

    for (const auto& comp : s.pre.mixture()) {
      for (Eigen::Index m = 0; m < post.cols(); ++m) {
        const double w = comp.weight * v;
        std::vector<Complex> c(spaces.size());
        for (std::size_t a = 0; a < spaces.size(); ++a) {
          c[a] = post.col(m).dot(spaces[a].projector * comp.state);
        }
        std::fill(phi.begin(), phi.end(), Complex{});
        for (std::size_t a = 0; a < spaces.size(); ++a) {
          if (c[a] == Complex{}) continue;
          for (std::size_t i = 0; i < qa.n; ++i) phi[i] += c[a] * shifted[a][i];
        }
        acc.norm += w * spectral::norm_squared(phi, qa.step);
        if (!moments) continue;

        for (std::size_t i = 0; i < qa.n; ++i) branch_q[i] = std::norm(phi[i]);
        add_q_moments(acc, branch_q, qa, w);
        acc.p1 += w * spectral::momentum_expectation(phi, qa.step, 1);
        acc.p2 += w * spectral::momentum_expectation(phi, qa.step, 2);
        if (with_densities) {
          for (std::size_t i = 0; i < qa.n; ++i) acc.q_density[i] += w * branch_q[i];
          std::fill(phit_out.begin(), phit_out.end(), Complex{});
          for (std::size_t a = 0; a < spaces.size(); ++a) {
            if (c[a] == Complex{}) continue;
            for (std::size_t i = 0; i < pa.n; ++i) phit_out[i] += c[a] * phases[a][i];
          }
          for (std::size_t i = 0; i < pa.n; ++i) {
            acc.p_density[i] += w * std::norm(phit_out[i] * phit[i]);
          }
        }
      }
    }
  }
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Complex ipow(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

WorkingAxes working_axes(const Scenario& s, const OracleOptions& options) {
  const double shift = std::abs(s.coupling()) * max_abs_eigenvalue(s.observable);
  WorkingAxes axes;
  axes.q = working_q_axis(s.pointer, shift, options.grid_n);
  axes.p = default_p_axis(s.pointer, axes.q.n);
  return axes;
}

MeasurementRecord evolve_postselect(const Scenario& s, const OracleOptions& options) {
  ExactOutcome out = run_exact(s, options, true, options.with_densities);
  if (!(out.acc.norm >= options.prob_floor)) {
    throw Error(ErrorCode::ZeroPostSelectionProbability,
                "post-selection probability is below the floor");
  }
  return finish(out.acc, s, out.axes, options.with_densities, Method::ExactSpectral);
}

double success_probability(const Scenario& s, const OracleOptions& options) {
  const double n = run_exact(s, options, false, false).acc.norm;
  return n < options.prob_floor ? 0.0 : n;
}

MeasurementRecord series_device_state(const Scenario& s, int order, const OracleOptions& options) {
  if (order < 0 || order > kMaxSeriesOrder) {
    throw Error(ErrorCode::OrderTooLarge, "series order must lie in [0, 16]");
  }
  const double g = s.coupling();
  const double margin = weak_interaction_margin(g, s.pointer, kDefaultMarginOrder);
  if (!(margin < 0.5)) {
    throw Error(ErrorCode::WeakInteractionViolated,
                "weak-interaction margin >= 0.5; the series is not usable");
  }

  const auto& t = options.thresholds;
  const bool orthogonal = overlap(s.post, s.pre) <= t.orth;

  // coef[n][k] multiplies p^{n-k} rho_d p^k.
  std::vector<std::vector<Complex>> coef(order + 1);
  const Complex mig{0.0, -g};
  if (!orthogonal) {
    for (int n = 0; n <= order; ++n) {
      coef[n].resize(n + 1);
      const Complex pre = ipow(mig, n) / factorial(n);
      for (int k = 0; k <= n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coef[n][k] = pre * sign * binomial(n, k) *
                     selection_trace(s.observable, s.pre, s.post, n - k, k);
      }
    }
  } else {
    const Complex second = selection_trace(s.observable, s.pre, s.post, 1, 1);
    if (!(std::abs(second) > t.g2)) {
      throw Error(ErrorCode::NotApplicable,
                  "orthogonal pre/post-selection with a vanishing g^2 term");
    }
    if (order < 2) {
      throw Error(ErrorCode::InvalidArgument, "the orthogonal series starts at order 2");
    }
    for (int n = 0; n <= order; ++n) {
      coef[n].assign(n + 1, Complex{});
      if (n < 2) continue;
      const Complex pre = ipow(mig, n) / factorial(n);
      for (int k = 1; k <= n - 1; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const int m = n - k - 1;
        const int l = k - 1;
        const double d = static_cast<double>((m + 1) * (l + 1));
        const Complex wo = selection_trace(s.observable, s.pre, s.post, m + 1, l + 1) / (d * second);
        coef[n][k] = pre * sign * binomial(n, k) * d * wo * second;
      }
    }
  }
  std::vector<double> c(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) {
    Complex sum{};
    for (const Complex& x : coef[n]) sum += x;
    c[n] = sum.real();
  }

  const WorkingAxes axes = working_axes(s, options);
  const Axis& qa = axes.q;
  const Axis& pa = axes.p;
  const auto k = spectral::wavenumbers(qa.n, qa.step);

  Accumulator acc;
  acc.q_density.assign(qa.n, 0.0);
  if (options.with_densities) acc.p_density.assign(pa.n, 0.0);
  std::vector<std::vector<double>> order_density(order + 1, std::vector<double>(qa.n, 0.0));

  for (std::size_t j = 0; j < s.pointer.branch_count(); ++j) {
    const double v = s.pointer.branch_weight(j);
    Samples spec = spectral::forward(sample_branch(s.pointer, j, qa, 0.0));
    double peak = 0.0;
    for (const Complex& x : spec) peak = std::max(peak, std::abs(x));
    for (Complex& x : spec) {
      if (std::abs(x) < kSpectrumFloor * peak) x = Complex{};
    }
    if (qa.n % 2 == 0) spec[qa.n / 2] = Complex{};

    std::vector<Samples> pm(order + 1);
    for (int m = 0; m <= order; ++m) {
      Samples y(qa.n);
      for (std::size_t i = 0; i < qa.n; ++i) y[i] = std::pow(k[i], m) * spec[i];
      pm[m] = spectral::inverse(y);
    }
    std::vector<double> mom(order + 3, 0.0);
    for (int m = 0; m <= order + 2; ++m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < qa.n; ++i) sum += std::pow(k[i], m) * std::norm(spec[i]);
      mom[m] = sum * qa.step / static_cast<double>(qa.n);
    }

    for (int n = 0; n <= order; ++n) {
      acc.norm += v * c[n] * mom[n];
      acc.p1 += v * c[n] * mom[n + 1];
      acc.p2 += v * c[n] * mom[n + 2];
      for (int kk = 0; kk <= n; ++kk) {
        const Complex cf = coef[n][kk];
        if (cf == Complex{}) continue;
        const Samples& left = pm[n - kk];
        const Samples& right = pm[kk];
        auto& dens = order_density[n];
        for (std::size_t i = 0; i < qa.n; ++i) {
          dens[i] += v * (cf * left[i] * std::conj(right[i])).real();
        }
      }
    }

    if (options.with_densities) {
      const Samples phit = momentum_amplitude(s.pointer, j, pa);
      for (std::size_t i = 0; i < pa.n; ++i) {
        const double p = pa.at(i);
        double poly = 0.0;
        double pk = 1.0;
        for (int n = 0; n <= order; ++n) {
          poly += c[n] * pk;
          pk *= p;
        }
        acc.p_density[i] += v * std::norm(phit[i]) * poly;
      }
    }
  }

  if (!(acc.norm >= options.prob_floor)) {
    throw Error(ErrorCode::ZeroPostSelectionProbability,
                "truncated normalization is below the probability floor");
  }

  std::vector<double> sup(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) {
    for (std::size_t i = 0; i < qa.n; ++i) {
      acc.q_density[i] += order_density[n][i];
      sup[n] = std::max(sup[n], std::abs(order_density[n][i]));
    }
    sup[n] /= acc.norm;
  }
  const int first = orthogonal ? 2 : 0;
  if (order - first >= 3) {
    const double a = sup[order - 2];
    const double b = sup[order - 1];
    const double cc = sup[order];
    if (a <= b && b <= cc && cc > 1e-12) {
      throw Error(ErrorCode::SeriesDiverging, "series terms do not decrease over the last 3 orders");
    }
  }

  add_q_moments(acc, acc.q_density, qa, 1.0);
  MeasurementRecord rec =
      finish(acc, s, axes, options.with_densities, Method::TruncatedSeries);
  if (!options.with_densities) rec.densities.reset();
  rec.series_order = order;
  rec.tail_estimate = sup[order];
  rec.orthogonal = orthogonal;
  return rec;
}

std::vector<double> local_maxima(const std::vector<double>& density, const Axis& axis,
                                 double rel_floor) {
  std::vector<double> out;
  if (density.size() < 3) return out;
  const double peak = *std::max_element(density.begin(), density.end());
  const double floor = rel_floor * peak;
  for (std::size_t i = 1; i + 1 < density.size(); ++i) {
    if (density[i] > floor && density[i] > density[i - 1] && density[i] > density[i + 1]) {
      out.push_back(axis.at(i));
    }
  }
  return out;
}

}  // namespace weakmeas
