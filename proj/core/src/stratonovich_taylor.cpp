// Copyright 2026 The qprojfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpf/stratonovich_taylor.hpp"

#include <cmath>
#include <string>

#include "qpf/parallel.hpp"
#include "qpf/quantum_filter.hpp"

namespace qpf {

WienerPath::WienerPath(double t0, double dt, std::vector<double> increments)
    : t0_(t0), dt_(dt), increments_(std::move(increments)) {
  if (!(dt_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "path step must be positive", dt_);
  cumulative_.resize(increments_.size() + 1);
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < increments_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + increments_[i];
  }
}

WienerPath WienerPath::sample(const NoiseStream& noise, double t0, double dt,
                              std::size_t steps) {
  return WienerPath(t0, dt, noise.wiener_increments(steps, dt));
}

std::size_t WienerPath::index_of(double t) const {
  const double position = (t - t0_) / dt_;
  const double nearest = std::round(position);
  if (std::abs(position - nearest) > 1e-9 * std::max(1.0, std::abs(position)) ||
      nearest < 0.0 || nearest > static_cast<double>(steps())) {
    throw Error(ErrorCode::TimeOffGrid,
                "time " + std::to_string(t) + " is not a grid point of the path", position);
  }
  return static_cast<std::size_t>(nearest);
}

OperatorProcess OperatorProcess::constant(ComplexMatrix value) {
  OperatorProcess out;
  out.constant_ = true;
  out.values_.push_back(std::move(value));
  return out;
}

OperatorProcess::OperatorProcess(std::vector<double> times, std::vector<ComplexMatrix> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size() || values_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "operator process needs one value per time");
  }
}

namespace {

void check_integral_length(const MultiIndex& alpha) {
  if (alpha.length() > kMaxIntegralLength) {
    throw Error(ErrorCode::OrderTooLarge,
                "iterated integrals are limited to length " +
                    std::to_string(kMaxIntegralLength),
                alpha.length());
  }
}

std::pair<std::size_t, std::size_t> grid_span(const WienerPath& path, double t1, double t2) {
  if (t1 > t2) throw Error(ErrorCode::InvalidArgument, "integration bounds reversed", t1 - t2);
  return {path.index_of(t1), path.index_of(t2)};
}

}  // namespace

ComplexMatrix iterated_integral(const MultiIndex& alpha, const WienerPath& path, double t1,
                                double t2, const OperatorProcess& integrand) {
  check_integral_length(alpha);
  const auto [i1, i2] = grid_span(path, t1, t2);
  if (!integrand.is_constant() && integrand.size() != path.steps() + 1) {
    throw Error(ErrorCode::TimeOffGrid, "integrand is not sampled on the path grid");
  }
  const std::size_t n = i2 - i1;
  std::vector<ComplexMatrix> level(n + 1);
  for (std::size_t i = 0; i <= n; ++i) level[i] = integrand.at(i1 + i);
  const ComplexMatrix zero = ComplexMatrix::Zero(level[0].rows(), level[0].cols());
  std::vector<ComplexMatrix> next(n + 1);
  for (auto e : alpha.entries()) {
    next[0] = zero;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = e == 0 ? path.dt() : path.increment(i1 + i);
      next[i + 1] = next[i] + (0.5 * step) * (level[i] + level[i + 1]);
    }
    std::swap(level, next);
  }
  return level[n];
}

double iterated_integral_of_one(const MultiIndex& alpha, const WienerPath& path,
                                std::size_t i1, std::size_t i2) {
  check_integral_length(alpha);
  if (i1 > i2 || i2 > path.steps()) {
    throw Error(ErrorCode::TimeOffGrid, "grid indices outside the path");
  }
  const std::size_t n = i2 - i1;
  std::vector<double> level(n + 1, 1.0);
  std::vector<double> next(n + 1);
  for (auto e : alpha.entries()) {
    next[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = e == 0 ? path.dt() : path.increment(i1 + i);
      next[i + 1] = next[i] + 0.5 * step * (level[i] + level[i + 1]);
    }
    std::swap(level, next);
  }
  return level[n];
}

double iterated_integral_of_one(const MultiIndex& alpha, const WienerPath& path, double t1,
                                double t2) {
  const auto [i1, i2] = grid_span(path, t1, t2);
  return iterated_integral_of_one(alpha, path, i1, i2);
}

ComplexMatrix d_operator(const MultiIndex& alpha, const SystemModel& model,
                         const ComplexMatrix& rho_bar) {
  require_same_shape(model.hamiltonian(), rho_bar, "d_operator");
  ComplexMatrix out = rho_bar;
  for (int i = alpha.length() - 1; i >= 0; --i) {
    out = alpha[i] == 0 ? linear_drift(model, out) : linear_diffusion(model, out);
  }
  return out;
}

ComplexMatrix l_operator(const MultiIndex& alpha, const Chart& chart, const ChartPoint& point,
                         const ProjectedField& field) {
  const int m = chart.dim_m();
  if (field.f.size() != m || field.g.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "projected field does not match the chart");
  }
  if (alpha.empty()) return point.rho_bar;
  if (alpha == MultiIndex{0}) return tangent_combination(point, field.f);
  if (alpha == MultiIndex{1}) return tangent_combination(point, field.g);
  if (alpha == MultiIndex{1, 1}) {
    if (field.g_jacobian.rows() != m || field.g_jacobian.cols() != m) {
      throw Error(ErrorCode::DimensionMismatch, "diffusion Jacobian must be m x m");
    }
    ComplexMatrix out = tangent_combination(point, field.g_jacobian * field.g);
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        const double w = field.g[p] * field.g[q];
        if (w != 0.0) out += w * chart_second_derivative(chart, point, p, q);
      }
    }
    return out;
  }
  throw Error(ErrorCode::UnsupportedOrder,
              "chart differentiators are implemented for (), (0), (1), (1,1); got " +
                  alpha.to_string(),
              alpha.length());
}

ComplexMatrix l_operator(const MultiIndex& alpha, const Chart& chart, const ThetaPoint& theta,
                         const ProjectedField& field) {
  return l_operator(alpha, chart, evaluate_chart(chart, theta), field);
}

namespace {

void check_expansion_order(int k, int limit) {
  if (k < 0 || k > limit) {
    throw Error(ErrorCode::OrderTooLarge,
                "expansion order must lie in [0, " + std::to_string(limit) + "]", k);
  }
}

template <class Coefficient>
TaylorExpansionResult assemble(int k, const WienerPath& path, double t1, double t2,
                               const ComplexMatrix& seed, Coefficient&& coefficient) {
  const auto [i1, i2] = grid_span(path, t1, t2);
  TaylorExpansionResult out;
  out.order = k;
  out.base_time = t1;
  out.eval_time = t2;
  out.value = ComplexMatrix::Zero(seed.rows(), seed.cols());
  for (const auto& alpha : lambda_set(k)) {
    ExpansionTerm term{iterated_integral_of_one(alpha, path, i1, i2), coefficient(alpha)};
    out.value += term.integral * term.coefficient;
    out.terms.emplace(alpha, std::move(term));
  }
  return out;
}

}  // namespace

TaylorExpansionResult taylor_expand_true(const SystemModel& model,
                                         const ComplexMatrix& rho_bar_t1, int k,
                                         const WienerPath& path, double t1, double t2) {
  check_expansion_order(k, kMaxExpansionOrder);
  return assemble(k, path, t1, t2, rho_bar_t1, [&](const MultiIndex& alpha) {
    return d_operator(alpha, model, rho_bar_t1);
  });
}

TaylorExpansionResult taylor_expand_projected(const Chart& chart, const ThetaPoint& theta_t1,
                                              const ProjectedField& field, int k,
                                              const WienerPath& path, double t1, double t2) {
  check_expansion_order(k, 2);
  const ChartPoint point = evaluate_chart(chart, theta_t1);
  return assemble(k, path, t1, t2, point.rho_bar, [&](const MultiIndex& alpha) {
    return l_operator(alpha, chart, point, field);
  });
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "slope fit needs two or more matching points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudyResult convergence_study(const SystemModel& model, const ComplexMatrix& rho0,
                                         int k, const std::vector<double>& horizons,
                                         int paths, std::uint64_t seed,
                                         const ConvergenceOptions& options) {
  check_expansion_order(k, kMaxExpansionOrder);
  require_same_shape(model.hamiltonian(), rho0, "convergence_study");
  if (horizons.empty() || paths < 1 || options.fine_divisions < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "convergence study needs horizons, paths >= 1 and fine_divisions >= 1");
  }
  double smallest = horizons.front();
  double largest = horizons.front();
  for (double delta : horizons) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "horizons must lie in (0, 1)", delta);
    }
    smallest = std::min(smallest, delta);
    largest = std::max(largest, delta);
  }
  const double h = smallest / options.fine_divisions;
  std::vector<std::size_t> endpoints;
  for (double delta : horizons) {
    const double ratio = delta / h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw Error(ErrorCode::InvalidArgument,
                  "horizon is not a multiple of the reference step", delta);
    }
    endpoints.push_back(static_cast<std::size_t>(std::round(ratio)));
  }
  const std::size_t total_steps = static_cast<std::size_t>(std::round(largest / h));

  const MultiIndexSet lambda = lambda_set(k);
  const MultiIndexSet remainder = remainder_set(k);
  std::vector<std::pair<MultiIndex, ComplexMatrix>> coefficients;
  for (const auto& alpha : lambda) coefficients.emplace_back(alpha, d_operator(alpha, model, rho0));

  const std::size_t n_h = horizons.size();
  const std::size_t n_r = remainder.size();
  struct PathResult {
    std::vector<double> squared_error;
    // (time slot, remainder index) -> ||D_beta||^2; slot 0 is t = 0.
    std::vector<double> moments;
  };
  std::vector<PathResult> results(static_cast<std::size_t>(paths));

  auto moments_at = [&](const ComplexMatrix& rho, double* out) {
    std::size_t r = 0;
    for (const auto& beta : remainder) out[r++] = d_operator(beta, model, rho).squaredNorm();
  };

  parallel_for(static_cast<std::size_t>(paths), options.workers, [&](std::size_t p) {
    const NoiseStream noise(seed, StreamKind::Convergence, static_cast<std::uint32_t>(p));
    const WienerPath path = WienerPath::sample(noise, 0.0, h, total_steps);
    PathResult res;
    res.squared_error.resize(n_h);
    res.moments.resize((n_h + 1) * n_r);
    moments_at(rho0, res.moments.data());

    std::vector<ComplexMatrix> reference(total_steps + 1);
    reference[0] = rho0;
    for (std::size_t i = 0; i < total_steps; ++i) {
      reference[i + 1] = heun_linear_step(reference[i], model, path.increment(i), h);
    }
    for (std::size_t j = 0; j < n_h; ++j) {
      ComplexMatrix expansion = ComplexMatrix::Zero(rho0.rows(), rho0.cols());
      for (const auto& [alpha, coefficient] : coefficients) {
        expansion += iterated_integral_of_one(alpha, path, 0, endpoints[j]) * coefficient;
      }
      const ComplexMatrix& exact = reference[endpoints[j]];
      res.squared_error[j] = (exact - expansion).squaredNorm();
      moments_at(exact, res.moments.data() + (j + 1) * n_r);
    }
    results[p] = std::move(res);
  });

  ConvergenceStudyResult out;
  out.order = k;
  out.horizons = horizons;
  out.paths = paths;
  out.seed = seed;
  out.fine_step = h;
  out.mse.assign(n_h, 0.0);
  out.mse_stderr.assign(n_h, 0.0);
  std::vector<double> second(n_h, 0.0);
  std::vector<double> moment_means((n_h + 1) * n_r, 0.0);
  for (const auto& res : results) {
    for (std::size_t j = 0; j < n_h; ++j) {
      out.mse[j] += res.squared_error[j];
      second[j] += res.squared_error[j] * res.squared_error[j];
    }
    for (std::size_t i = 0; i < moment_means.size(); ++i) moment_means[i] += res.moments[i];
  }
  const double np = static_cast<double>(paths);
  for (std::size_t j = 0; j < n_h; ++j) {
    out.mse[j] /= np;
    const double var = std::max(0.0, second[j] / np - out.mse[j] * out.mse[j]);
    out.mse_stderr[j] = paths > 1 ? std::sqrt(var / (np - 1.0)) : 0.0;
  }
  for (double v : moment_means) out.moment_bound = std::max(out.moment_bound, v / np);
  for (double delta : horizons) {
    out.bound.push_back(out.moment_bound * std::pow(2.0 * delta, k + 1));
  }
  bool positive = true;
  for (double e : out.mse) positive = positive && e > 0.0;
  out.slope = positive ? log_log_slope(out.horizons, out.mse) : 0.0;
  return out;
}

}  // namespace qpf
