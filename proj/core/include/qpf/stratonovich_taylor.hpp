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

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qpf/manifold_geometry.hpp"
#include "qpf/multi_index.hpp"
#include "qpf/operator_algebra.hpp"
#include "qpf/random.hpp"

namespace qpf {

/// Sampled driving path on a uniform grid: Y^0_t = t and Y^1_t = Y_t with
/// Y(t0) = 0.
class WienerPath {
 public:
  WienerPath(double t0, double dt, std::vector<double> increments);

  /// steps increments of size dt drawn from the stream.
  static WienerPath sample(const NoiseStream& noise, double t0, double dt, std::size_t steps);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return increments_.size(); }
  double time(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }
  double increment(std::size_t i) const { return increments_[i]; }
  /// Y at grid point i.
  double value(std::size_t i) const { return cumulative_[i]; }
  const std::vector<double>& increments() const noexcept { return increments_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  /// Grid index of t; throws TimeOffGrid when t is not a grid point.
  std::size_t index_of(double t) const;

 private:
  double t0_;
  double dt_;
  std::vector<double> increments_;
  std::vector<double> cumulative_;
};

/// Operator-valued integrand sampled on a path grid, or a constant.
class OperatorProcess {
 public:
  static OperatorProcess constant(ComplexMatrix value);
  OperatorProcess(std::vector<double> times, std::vector<ComplexMatrix> values);

  bool is_constant() const noexcept { return constant_; }
  std::size_t size() const noexcept { return values_.size(); }
  const ComplexMatrix& at(std::size_t grid_index) const {
    return constant_ ? values_.front() : values_[grid_index];
  }
  const std::vector<double>& times() const noexcept { return times_; }

 private:
  OperatorProcess() = default;
  bool constant_ = false;
  std::vector<double> times_;
  std::vector<ComplexMatrix> values_;
};

inline constexpr int kMaxIntegralLength = 6;

/// Iterated Stratonovich integral I^alpha_{t1,t2}(a): the innermost level is
/// the integrand at the running time; level i integrates against dt
/// (alpha_i = 0) or o dY (alpha_i = 1) with the trapezoidal (midpoint-average)
/// rule on the path grid.
ComplexMatrix iterated_integral(const MultiIndex& alpha, const WienerPath& path, double t1,
                                double t2, const OperatorProcess& integrand);

/// I^alpha_{t1,t2}(1) on grid indices [i1, i2].
double iterated_integral_of_one(const MultiIndex& alpha, const WienerPath& path,
                                std::size_t i1, std::size_t i2);
double iterated_integral_of_one(const MultiIndex& alpha, const WienerPath& path, double t1,
                                double t2);

/// D_alpha(rho_bar) = D^{alpha_1}(D_{-alpha}(rho_bar)), D_() = identity, with
/// D^0 the linear-filter drift and D^1 its diffusion.
ComplexMatrix d_operator(const MultiIndex& alpha, const SystemModel& model,
                         const ComplexMatrix& rho_bar);

/// Coefficients of a projection filter at one chart point. The Jacobian
/// convention is g_jacobian(p, q) = d g_p / d theta_q.
struct ProjectedField {
  RealVector f;
  RealVector g;
  RealMatrix g_jacobian;
};

/// L_alpha on the chart for alpha in { (), (0), (1), (1,1) }:
///   L^0 = sum_i f_i d_i,  L^1 = sum_i g_i d_i,
///   L^1 L^1 = sum_p ((dg/dtheta) g)_p d_p + sum_{p,q} g_p g_q d_p d_q rho.
/// Throws UnsupportedOrder otherwise.
ComplexMatrix l_operator(const MultiIndex& alpha, const Chart& chart, const ChartPoint& point,
                         const ProjectedField& field);
ComplexMatrix l_operator(const MultiIndex& alpha, const Chart& chart, const ThetaPoint& theta,
                         const ProjectedField& field);

struct ExpansionTerm {
  double integral = 0.0;
  ComplexMatrix coefficient;
};

/// Order-k Stratonovich-Taylor expansion evaluated at eval_time from base_time.
struct TaylorExpansionResult {
  int order = 0;
  double base_time = 0.0;
  double eval_time = 0.0;
  ComplexMatrix value;
  std::map<MultiIndex, ExpansionTerm> terms;
};

inline constexpr int kMaxExpansionOrder = 4;

/// SE(rho_bar_{t2})_k = sum_{alpha in Lambda_k} I^alpha_{t1,t2}(1) D_alpha(rho_bar_{t1}).
TaylorExpansionResult taylor_expand_true(const SystemModel& model,
                                         const ComplexMatrix& rho_bar_t1, int k,
                                         const WienerPath& path, double t1, double t2);

/// Same expansion for the chart curve, with L_alpha evaluated at theta_{t1};
/// k <= 2.
TaylorExpansionResult taylor_expand_projected(const Chart& chart, const ThetaPoint& theta_t1,
                                              const ProjectedField& field, int k,
                                              const WienerPath& path, double t1, double t2);

struct ConvergenceOptions {
  // Reference solution step = smallest horizon / fine_divisions.
  int fine_divisions = 16;
  int workers = 0;
};

struct ConvergenceStudyResult {
  int order = 0;
  std::vector<double> horizons;
  std::vector<double> mse;
  std::vector<double> mse_stderr;
  // R * (2 delta)^{k+1} with R the estimated moment bound.
  std::vector<double> bound;
  double slope = 0.0;
  // Largest mean ||D_beta(rho_bar_t)||_F^2 over beta in R(Lambda_k) and the
  // sampled times.
  double moment_bound = 0.0;
  int paths = 0;
  std::uint64_t seed = 0;
  double fine_step = 0.0;
};

/// Monte Carlo estimate of E||rho_bar_{Delta} - SE(rho_bar_{Delta})_k||_F^2
/// from rho_bar_0 = rho0 for each horizon, with a least-squares log-log slope.
/// The reference trajectory is the Heun solution of the linear filter on the
/// fine grid, driven by the same path the iterated integrals use.
ConvergenceStudyResult convergence_study(const SystemModel& model, const ComplexMatrix& rho0,
                                         int k, const std::vector<double>& horizons,
                                         int paths, std::uint64_t seed,
                                         const ConvergenceOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qpf
