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

#include <vector>

#include "qpf/operator_algebra.hpp"

namespace qpf {

/// Exponential submanifold chart
///   rho_bar(theta) = e^{(1/2) sum_i theta_i A_i} rho_0 e^{(1/2) sum_i theta_i A_i}
/// with pairwise-commuting self-adjoint generators A_i. Commutativity and the
/// base-state invariants are checked once, here.
class Chart {
 public:
  Chart(std::vector<ComplexMatrix> generators, ComplexMatrix base_state,
        const Tolerances& tol = kTolerances);

  int dim_n() const noexcept { return family_.dim(); }
  int dim_m() const noexcept { return family_.size(); }
  const std::vector<ComplexMatrix>& generators() const noexcept {
    return family_.generators();
  }
  const ComplexMatrix& generator(int i) const {
    return family_.generators()[static_cast<std::size_t>(i)];
  }
  const ComplexMatrix& base_state() const noexcept { return base_state_; }
  const CommutingFamily& family() const noexcept { return family_; }
  const Tolerances& tolerances() const noexcept { return tol_; }

 private:
  CommutingFamily family_;
  ComplexMatrix base_state_;
  Tolerances tol_;
};

/// Chart coordinates; finite and inside the box |theta|_inf <= theta_bound.
class ThetaPoint {
 public:
  explicit ThetaPoint(RealVector coords, const Tolerances& tol = kTolerances);
  static ThetaPoint origin(int m) { return ThetaPoint(RealVector::Zero(m)); }

  const RealVector& coords() const noexcept { return coords_; }
  int size() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  RealVector coords_;
};

/// Quantum Fisher matrix r_ij = Tr(d_i A_j) with a Cholesky factorization
/// of its diagonally equilibrated form for applying R^{-1}. SingularMetric is
/// raised when the equilibrated matrix has min/max eigenvalue ratio below
/// Tolerances::metric_condition.
class FisherMatrix {
 public:
  explicit FisherMatrix(RealMatrix entries, const Tolerances& tol = kTolerances);

  const RealMatrix& entries() const noexcept { return entries_; }
  double condition_estimate() const noexcept { return condition_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  RealVector solve(const RealVector& rhs) const;
  RealMatrix inverse() const;

 private:
  RealMatrix entries_;
  RealVector inv_sqrt_diag_;
  Eigen::LLT<RealMatrix> factor_;
  double condition_ = 1.0;
  double min_eigenvalue_ = 0.0;
};

/// Everything the coefficient formulas need at one chart point, computed
/// once: the state, the tangent basis d_i = (A_i rho + rho A_i)/2, and the
/// Fisher matrix.
struct ChartPoint {
  RealVector theta;
  ComplexMatrix rho_bar;
  std::vector<ComplexMatrix> tangent;
  FisherMatrix fisher;
};

ChartPoint evaluate_chart(const Chart& chart, const ThetaPoint& theta);

UnnormalizedState chart_state(const Chart& chart, const ThetaPoint& theta);

std::vector<ComplexMatrix> tangent_basis(const Chart& chart, const ThetaPoint& theta);

/// <<a, b>>_rho = Tr(rho (ab + ba)) / 2
double symmetrized_inner(const ComplexMatrix& rho_bar, const ComplexMatrix& a,
                         const ComplexMatrix& b);

FisherMatrix fisher_matrix(const Chart& chart, const ThetaPoint& theta);

/// Coordinates c of the orthogonal projection of a self-adjoint nu onto the
/// tangent space: c = R^{-1} [Tr(nu A_j)]_j, so that Pi(nu) = sum_i c_i d_i.
RealVector project_coordinates(const Chart& chart, const ThetaPoint& theta,
                               const ComplexMatrix& nu);
RealVector project_coordinates(const Chart& chart, const ChartPoint& point,
                               const ComplexMatrix& nu);

/// sum_i c_i d_i
ComplexMatrix tangent_combination(const ChartPoint& point, const RealVector& c);

/// d r_jk / d theta_i as an m x m matrix.
RealMatrix fisher_derivative(const Chart& chart, const ThetaPoint& theta, int direction);
RealMatrix fisher_derivative(const Chart& chart, const ChartPoint& point, int direction);

/// d^2 rho_bar / d theta_p d theta_q
///   = (A_p A_q rho + A_p rho A_q + A_q rho A_p + rho A_q A_p) / 4.
ComplexMatrix chart_second_derivative(const Chart& chart, const ThetaPoint& theta, int p,
                                      int q);
ComplexMatrix chart_second_derivative(const Chart& chart, const ChartPoint& point, int p,
                                      int q);

}  // namespace qpf
