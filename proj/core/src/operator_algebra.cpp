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

#include "qpf/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qpf {
namespace {

const Complex kI{0.0, 1.0};

double relative_scale(const ComplexMatrix& x) { return std::max(1.0, x.norm()); }

}  // namespace

void require_square(const ComplexMatrix& a, const char* where) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": expected a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& x) {
  return 0.5 * (x + x.adjoint());
}

double hermiticity_defect(const ComplexMatrix& x) {
  return (x - x.adjoint()).norm();
}

double min_eigenvalue(const ComplexMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(x),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

SystemModel::SystemModel(ComplexMatrix hamiltonian, ComplexMatrix coupling)
    : hamiltonian_(std::move(hamiltonian)), coupling_(std::move(coupling)) {
  require_square(hamiltonian_, "SystemModel hamiltonian");
  require_same_shape(hamiltonian_, coupling_, "SystemModel coupling");
  const double defect = hermiticity_defect(hamiltonian_);
  if (defect > kTolerances.model_hermitian * relative_scale(hamiltonian_)) {
    throw Error(ErrorCode::NotSelfAdjoint, "Hamiltonian is not self-adjoint", defect);
  }
  coupling_adj_ = coupling_.adjoint();
  coupling_number_ = coupling_adj_ * coupling_;
  coupling_quadrature_ = coupling_ + coupling_adj_;
}

UnnormalizedState::UnnormalizedState(ComplexMatrix matrix, const Tolerances& tol)
    : matrix_(std::move(matrix)) {
  require_square(matrix_, "UnnormalizedState");
  const double defect = hermiticity_defect(matrix_);
  if (defect > tol.state_hermitian * relative_scale(matrix_)) {
    throw Error(ErrorCode::NotSelfAdjoint, "unnormalized state is not self-adjoint",
                defect);
  }
  const double tr = matrix_.trace().real();
  if (!(tr > 0.0)) {
    throw Error(ErrorCode::NonPositiveTrace, "unnormalized state trace is not positive",
                tr);
  }
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < tol.eigenvalue_floor * std::max(1.0, tr)) {
    throw Error(ErrorCode::InvariantViolation,
                "unnormalized state has a negative eigenvalue", lowest);
  }
}

double UnnormalizedState::trace() const { return matrix_.trace().real(); }

DensityState::DensityState(ComplexMatrix matrix, const Tolerances& tol)
    : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityState");
  const double defect = hermiticity_defect(matrix_);
  if (defect > tol.state_hermitian * relative_scale(matrix_)) {
    throw Error(ErrorCode::NotSelfAdjoint, "density state is not self-adjoint", defect);
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol.unit_trace) {
    throw Error(ErrorCode::InvariantViolation, "density state trace differs from one",
                tr - 1.0);
  }
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < tol.eigenvalue_floor) {
    throw Error(ErrorCode::InvariantViolation, "density state has a negative eigenvalue",
                lowest);
  }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix lindblad(const SystemModel& model, const ComplexMatrix& x) {
  require_same_shape(model.hamiltonian(), x, "lindblad");
  const ComplexMatrix& h = model.hamiltonian();
  const ComplexMatrix& num = model.coupling_number();
  return kI * (h * x - x * h) + model.coupling_adjoint() * x * model.coupling() -
         0.5 * (num * x + x * num);
}

ComplexMatrix adjoint_lindblad(const SystemModel& model, const ComplexMatrix& rho) {
  require_same_shape(model.hamiltonian(), rho, "adjoint_lindblad");
  const ComplexMatrix& h = model.hamiltonian();
  const ComplexMatrix& num = model.coupling_number();
  return -kI * (h * rho - rho * h) + model.coupling() * rho * model.coupling_adjoint() -
         0.5 * (num * rho + rho * num);
}

ComplexMatrix stratonovich_drift_correction(const SystemModel& model,
                                            const ComplexMatrix& rho_bar) {
  require_same_shape(model.hamiltonian(), rho_bar, "stratonovich_drift_correction");
  const ComplexMatrix& q = model.coupling_quadrature();
  return 0.5 * (q * model.coupling() * rho_bar + rho_bar * model.coupling_adjoint() * q);
}

double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_distance");
  return (a - b).norm();
}

DensityState normalize(const UnnormalizedState& rho_bar, const Tolerances& tol) {
  const double tr = rho_bar.trace();
  if (!(tr > tol.trace_floor)) {
    throw Error(ErrorCode::NonPositiveTrace, "cannot normalize a collapsed state", tr);
  }
  return DensityState(rho_bar.matrix() / tr, tol);
}

CommutingFamily::CommutingFamily(std::vector<ComplexMatrix> generators,
                                 const Tolerances& tol)
    : generators_(std::move(generators)) {
  if (generators_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "commuting family needs a generator");
  }
  require_square(generators_.front(), "CommutingFamily");
  dim_ = static_cast<int>(generators_.front().rows());
  const int m = size();
  for (int i = 0; i < m; ++i) {
    require_same_shape(generators_[0], generators_[i], "CommutingFamily");
    const double defect = hermiticity_defect(generators_[i]);
    if (defect > tol.generator_hermitian * relative_scale(generators_[i])) {
      throw Error(ErrorCode::NotSelfAdjoint,
                  "generator " + std::to_string(i) + " is not self-adjoint", defect);
    }
  }
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      worst = std::max(worst, commutator(generators_[i], generators_[j]).norm());
    }
  }
  if (worst > tol.commutator) {
    throw Error(ErrorCode::NonCommutingGenerators,
                "chart generators do not commute pairwise", worst);
  }

  // A generic real combination separates every joint eigenspace, so its
  // eigenvectors diagonalize all members at once.
  ComplexMatrix mix = ComplexMatrix::Zero(dim_, dim_);
  for (int i = 0; i < m; ++i) {
    mix += (1.0 / (std::sqrt(2.0) + 0.6180339887498949 * i)) * generators_[i];
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(mix));
  basis_ = solver.eigenvectors();
  eigenvalues_.resize(dim_, m);
  double off_diagonal = 0.0;
  for (int i = 0; i < m; ++i) {
    const ComplexMatrix rotated = basis_.adjoint() * generators_[i] * basis_;
    eigenvalues_.col(i) = rotated.diagonal().real();
    ComplexMatrix rest = rotated;
    rest.diagonal().setZero();
    off_diagonal = std::max(off_diagonal, rest.norm());
  }
  diagonalized_ = off_diagonal <= tol.commutator;
}

ComplexMatrix CommutingFamily::half_exponential(const RealVector& weights) const {
  if (weights.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(size()) + " weights, got " +
                    std::to_string(weights.size()));
  }
  if (diagonalized_) {
    const RealVector exponent = 0.5 * (eigenvalues_ * weights);
    const Eigen::VectorXcd scale = exponent.array().exp().cast<Complex>();
    return basis_ * scale.asDiagonal() * basis_.adjoint();
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (int i = 0; i < size(); ++i) sum += (0.5 * weights[i]) * generators_[i];
  return sum.exp();
}

ComplexMatrix commuting_exponential(std::span<const ComplexMatrix> generators,
                                    const RealVector& weights, const Tolerances& tol) {
  CommutingFamily family(std::vector<ComplexMatrix>(generators.begin(), generators.end()),
                         tol);
  return family.half_exponential(weights);
}

}  // namespace qpf
