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

#include "qpf/manifold_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpf {

Chart::Chart(std::vector<ComplexMatrix> generators, ComplexMatrix base_state,
             const Tolerances& tol)
    : family_(std::move(generators), tol), base_state_(std::move(base_state)), tol_(tol) {
  require_same_shape(family_.generators().front(), base_state_, "Chart base state");
  const int n = family_.dim();
  if (family_.size() > n * n) {
    throw Error(ErrorCode::InvariantViolation,
                "chart dimension m exceeds n^2", family_.size());
  }
  // Validates self-adjointness, unit trace and positivity.
  DensityState checked(base_state_, tol);
  (void)checked;
}

ThetaPoint::ThetaPoint(RealVector coords, const Tolerances& tol) : coords_(std::move(coords)) {
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    const double v = coords_[i];
    if (!std::isfinite(v) || std::abs(v) > tol.theta_bound) {
      throw Error(ErrorCode::OverflowGuard,
                  "chart coordinate " + std::to_string(i) + " left the admissible box", v);
    }
  }
}

FisherMatrix::FisherMatrix(RealMatrix entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  const double asym = (entries_ - entries_.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, entries_.norm())) {
    throw Error(ErrorCode::InvariantViolation, "Fisher matrix is not symmetric", asym);
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
  const RealVector diag = entries_.diagonal();
  if (!(diag.minCoeff() > 0.0)) {
    throw Error(ErrorCode::SingularMetric, "Fisher matrix has a non-positive diagonal",
                diag.minCoeff());
  }
  // Tangent directions can carry weights that differ by many orders of
  // magnitude as the state purifies; degeneracy is judged on the
  // equilibrated matrix D^{-1/2} R D^{-1/2}, which is invariant to
  // rescaling individual coordinates.
  inv_sqrt_diag_ = diag.cwiseSqrt().cwiseInverse();
  const RealMatrix scaled = inv_sqrt_diag_.asDiagonal() * entries_ * inv_sqrt_diag_.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RealMatrix> scaled_solver(scaled, Eigen::EigenvaluesOnly);
  const double lo = scaled_solver.eigenvalues().minCoeff();
  const double hi = scaled_solver.eigenvalues().maxCoeff();
  if (lo < tol.metric_condition * hi) {
    throw Error(ErrorCode::SingularMetric, "Fisher matrix is singular", lo / hi);
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = solver.eigenvalues().minCoeff();
  condition_ = std::max(1.0, solver.eigenvalues().maxCoeff() / min_eigenvalue_);
  factor_.compute(scaled);
  if (factor_.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "Cholesky factorization failed", lo / hi);
  }
}

RealVector FisherMatrix::solve(const RealVector& rhs) const {
  const RealVector scaled_rhs = inv_sqrt_diag_.cwiseProduct(rhs);
  return inv_sqrt_diag_.cwiseProduct(factor_.solve(scaled_rhs));
}

RealMatrix FisherMatrix::inverse() const {
  const auto m = entries_.rows();
  RealMatrix out(m, m);
  for (Eigen::Index j = 0; j < m; ++j) out.col(j) = solve(RealVector::Unit(m, j));
  return out;
}

namespace {

void require_chart_theta(const Chart& chart, const RealVector& theta) {
  if (theta.size() != chart.dim_m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "theta has " + std::to_string(theta.size()) + " entries, chart has " +
                    std::to_string(chart.dim_m()));
  }
}

ComplexMatrix chart_matrix(const Chart& chart, const RealVector& theta) {
  const ComplexMatrix half = chart.family().half_exponential(theta);
  return half * chart.base_state() * half;
}

RealMatrix metric_entries(const Chart& chart, const std::vector<ComplexMatrix>& tangent) {
  const int m = chart.dim_m();
  RealMatrix r(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) r(i, j) = trace_product_real(tangent[i], chart.generator(j));
  }
  return r;
}

}  // namespace

ChartPoint evaluate_chart(const Chart& chart, const ThetaPoint& theta) {
  require_chart_theta(chart, theta.coords());
  ComplexMatrix rho = hermitian_part(chart_matrix(chart, theta.coords()));
  std::vector<ComplexMatrix> tangent;
  tangent.reserve(static_cast<std::size_t>(chart.dim_m()));
  for (const auto& a : chart.generators()) tangent.push_back(0.5 * (a * rho + rho * a));
  FisherMatrix fisher(metric_entries(chart, tangent), chart.tolerances());
  return ChartPoint{theta.coords(), std::move(rho), std::move(tangent), std::move(fisher)};
}

UnnormalizedState chart_state(const Chart& chart, const ThetaPoint& theta) {
  require_chart_theta(chart, theta.coords());
  return UnnormalizedState(hermitian_part(chart_matrix(chart, theta.coords())),
                           chart.tolerances());
}

std::vector<ComplexMatrix> tangent_basis(const Chart& chart, const ThetaPoint& theta) {
  const ComplexMatrix rho = chart_state(chart, theta).matrix();
  std::vector<ComplexMatrix> out;
  for (const auto& a : chart.generators()) out.push_back(0.5 * (a * rho + rho * a));
  return out;
}

double symmetrized_inner(const ComplexMatrix& rho_bar, const ComplexMatrix& a,
                         const ComplexMatrix& b) {
  require_same_shape(rho_bar, a, "symmetrized_inner");
  require_same_shape(rho_bar, b, "symmetrized_inner");
  return 0.5 * (trace_product_real(rho_bar, a * b) + trace_product_real(rho_bar, b * a));
}

FisherMatrix fisher_matrix(const Chart& chart, const ThetaPoint& theta) {
  return evaluate_chart(chart, theta).fisher;
}

RealVector project_coordinates(const Chart& chart, const ChartPoint& point,
                               const ComplexMatrix& nu) {
  require_same_shape(point.rho_bar, nu, "project_coordinates");
  const int m = chart.dim_m();
  RealVector pairing(m);
  for (int j = 0; j < m; ++j) pairing[j] = trace_product_real(nu, chart.generator(j));
  return point.fisher.solve(pairing);
}

RealVector project_coordinates(const Chart& chart, const ThetaPoint& theta,
                               const ComplexMatrix& nu) {
  return project_coordinates(chart, evaluate_chart(chart, theta), nu);
}

ComplexMatrix tangent_combination(const ChartPoint& point, const RealVector& c) {
  ComplexMatrix out = ComplexMatrix::Zero(point.rho_bar.rows(), point.rho_bar.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) out += c[i] * point.tangent[static_cast<std::size_t>(i)];
  return out;
}

RealMatrix fisher_derivative(const Chart& chart, const ChartPoint& point, int direction) {
  const int m = chart.dim_m();
  if (direction < 0 || direction >= m) {
    throw Error(ErrorCode::DimensionMismatch, "fisher_derivative direction out of range",
                direction);
  }
  // d/dtheta_i Tr(rho (A_j A_k + A_k A_j)/2) = Tr(d_i (A_j A_k + A_k A_j))/2.
  const ComplexMatrix& d_i = point.tangent[static_cast<std::size_t>(direction)];
  RealMatrix out(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = j; k < m; ++k) {
      const ComplexMatrix sym = chart.generator(j) * chart.generator(k) +
                                chart.generator(k) * chart.generator(j);
      out(j, k) = out(k, j) = 0.5 * trace_product_real(d_i, sym);
    }
  }
  return out;
}

RealMatrix fisher_derivative(const Chart& chart, const ThetaPoint& theta, int direction) {
  return fisher_derivative(chart, evaluate_chart(chart, theta), direction);
}

ComplexMatrix chart_second_derivative(const Chart& chart, const ChartPoint& point, int p,
                                      int q) {
  const int m = chart.dim_m();
  if (p < 0 || p >= m || q < 0 || q >= m) {
    throw Error(ErrorCode::DimensionMismatch, "chart_second_derivative index out of range");
  }
  const ComplexMatrix& ap = chart.generator(p);
  const ComplexMatrix& aq = chart.generator(q);
  const ComplexMatrix& rho = point.rho_bar;
  return 0.25 * (ap * aq * rho + ap * rho * aq + aq * rho * ap + rho * aq * ap);
}

ComplexMatrix chart_second_derivative(const Chart& chart, const ThetaPoint& theta, int p,
                                      int q) {
  return chart_second_derivative(chart, evaluate_chart(chart, theta), p, q);
}

}  // namespace qpf
