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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpf/error.hpp"
#include "qpf/tolerances.hpp"

namespace qpf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Closed system data of a monitored n-level system: Hamiltonian H (hbar = 1)
/// and the single measurement coupling L. Products of L that every filter
/// step needs are cached at construction.
class SystemModel {
 public:
  SystemModel(ComplexMatrix hamiltonian, ComplexMatrix coupling);

  int dim() const noexcept { return static_cast<int>(hamiltonian_.rows()); }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const ComplexMatrix& coupling() const noexcept { return coupling_; }
  const ComplexMatrix& coupling_adjoint() const noexcept { return coupling_adj_; }
  // L^dagger L
  const ComplexMatrix& coupling_number() const noexcept { return coupling_number_; }
  // L + L^dagger
  const ComplexMatrix& coupling_quadrature() const noexcept { return coupling_quadrature_; }

 private:
  ComplexMatrix hamiltonian_;
  ComplexMatrix coupling_;
  ComplexMatrix coupling_adj_;
  ComplexMatrix coupling_number_;
  ComplexMatrix coupling_quadrature_;
};

/// Solution of the linear (unnormalized) filter: self-adjoint, positive
/// semidefinite up to integration noise, strictly positive trace.
class UnnormalizedState {
 public:
  explicit UnnormalizedState(ComplexMatrix matrix,
                             const Tolerances& tol = kTolerances);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  double trace() const;

 private:
  ComplexMatrix matrix_;
};

/// Density operator: self-adjoint, unit trace, positive semidefinite.
class DensityState {
 public:
  explicit DensityState(ComplexMatrix matrix, const Tolerances& tol = kTolerances);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
};

// -- elementary helpers ------------------------------------------------------

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* where);
void require_square(const ComplexMatrix& a, const char* where);

ComplexMatrix hermitian_part(const ComplexMatrix& x);

// |X - X^dagger|_F
double hermiticity_defect(const ComplexMatrix& x);

// Smallest eigenvalue of the Hermitian part of x.
double min_eigenvalue(const ComplexMatrix& x);

// Real part of Tr(a b) without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

// -- named super-operators ---------------------------------------------------

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Heisenberg-picture Lindblad generator
/// L(X) = i[H,X] + L^dag X L - (L^dag L X + X L^dag L)/2,
/// so that Tr(adjoint_lindblad(rho) X) = Tr(rho L(X)).
ComplexMatrix lindblad(const SystemModel& model, const ComplexMatrix& x);

/// Its trace dual acting on states,
/// -i[H,rho] + L rho L^dag - (L^dag L rho + rho L^dag L)/2.
ComplexMatrix adjoint_lindblad(const SystemModel& model, const ComplexMatrix& rho);

/// Ito-to-Stratonovich correction of the linear filter,
/// ((L + L^dag) L rho + rho L^dag (L + L^dag)) / 2.
ComplexMatrix stratonovich_drift_correction(const SystemModel& model,
                                            const ComplexMatrix& rho_bar);

/// Hilbert-Schmidt (Frobenius) distance |a - b|_F; equals sqrt(Tr((a-b)^2))
/// when a - b is self-adjoint.
double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// rho_bar / Tr(rho_bar). Throws NonPositiveTrace when the trace is not above
/// the trace floor.
DensityState normalize(const UnnormalizedState& rho_bar,
                       const Tolerances& tol = kTolerances);

// -- commuting families ------------------------------------------------------

/// Shared eigenbasis of a family of pairwise-commuting self-adjoint matrices.
/// exp(0.5 * sum_i w_i A_i) is then U diag(exp(0.5 * sum_i w_i d_i)) U^dag.
class CommutingFamily {
 public:
  explicit CommutingFamily(std::vector<ComplexMatrix> generators,
                           const Tolerances& tol = kTolerances);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(generators_.size()); }
  const std::vector<ComplexMatrix>& generators() const noexcept { return generators_; }
  const ComplexMatrix& eigenbasis() const noexcept { return basis_; }
  // Column i holds the eigenvalues of generator i in the shared basis.
  const RealMatrix& eigenvalues() const noexcept { return eigenvalues_; }
  bool diagonalized() const noexcept { return diagonalized_; }

  /// exp(0.5 * sum_i weights_i A_i)
  ComplexMatrix half_exponential(const RealVector& weights) const;

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> generators_;
  ComplexMatrix basis_;
  RealMatrix eigenvalues_;
  bool diagonalized_ = false;
};

/// e^{(1/2) sum_i weights_i A_i} for pairwise-commuting self-adjoint A_i.
/// Throws NonCommutingGenerators with the largest commutator norm.
ComplexMatrix commuting_exponential(std::span<const ComplexMatrix> generators,
                                    const RealVector& weights,
                                    const Tolerances& tol = kTolerances);

}  // namespace qpf
