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

#include <span>
#include <vector>

#include "qpf/operator_algebra.hpp"

namespace qpf {

// Coefficients of the linear Stratonovich filter
//   d rho_bar = D0(rho_bar) dt + D1(rho_bar) o dY.

/// D0(rho) = -i[H, rho] - S_L(rho)
ComplexMatrix linear_drift(const SystemModel& model, const ComplexMatrix& rho_bar);
/// D1(rho) = L rho + rho L^dag
ComplexMatrix linear_diffusion(const SystemModel& model, const ComplexMatrix& rho_bar);

/// Homodyne record increment dY = Tr(rho (L + L^dag)) dt + dW.
double observation_increment(const DensityState& rho, const SystemModel& model, double dw,
                             double dt);

/// One step of the normalized (Ito) quantum filter driven by the observed
/// increment dY, in Kraus form:
///   M = I - (iH + L^dag L / 2) dt + L dY + L^2 (dY^2 - dt) / 2,
///   rho' = M rho M^dag / Tr(M rho M^dag).
/// Expanding M rho M^dag with dY^2 -> dt recovers the Euler-Maruyama
/// increment, and the map is completely positive, so purifying trajectories
/// keep a nonnegative spectrum. DensityState validation still rejects
/// eigenvalues below the floor.
DensityState sme_ito_step(const DensityState& rho, const SystemModel& model, double dy,
                          double dt);

/// Plain Euler-Maruyama step of the same equation, re-symmetrized and
/// renormalized. Not positivity preserving: returns the raw matrix so callers
/// can inspect the spectrum. Throws NonPositiveTrace.
ComplexMatrix sme_euler_maruyama_step(const ComplexMatrix& rho, const SystemModel& model,
                                      double dy, double dt);

/// One Heun (predictor-corrector) step of the linear Stratonovich filter.
UnnormalizedState linear_stratonovich_step(const UnnormalizedState& rho_bar,
                                           const SystemModel& model, double dy, double dt);

/// Same step on a raw matrix, without state validation (hot loops).
ComplexMatrix heun_linear_step(const ComplexMatrix& rho_bar, const SystemModel& model,
                               double dy, double dt);

/// Output of a full quantum-filter run. `observations[j]` is the record
/// increment over [t_j, t_{j+1}); `states` has one more entry than
/// `observations`.
struct SmeTrajectory {
  double dt = 0.0;
  std::vector<ComplexMatrix> states;
  std::vector<double> observations;
  // Smallest eigenvalue seen along the path, before it was accepted.
  double min_eigenvalue = 0.0;
  double max_trace_defect = 0.0;
};

/// Integrates the Ito filter from rho0 with innovation increments dW, producing
/// the observation record on the way.
SmeTrajectory integrate_sme(const SystemModel& model, const DensityState& rho0,
                            std::span<const double> dw, double dt);

/// Integrates the filter for a given observation record (no self-generated
/// record); used to compare integrators on identical dY.
SmeTrajectory integrate_sme_given_record(const SystemModel& model, const DensityState& rho0,
                                         std::span<const double> dy, double dt);

/// Heun integration of the linear filter for an observation record; returns
/// one unnormalized state per grid point.
std::vector<ComplexMatrix> integrate_linear_filter(const SystemModel& model,
                                                   const ComplexMatrix& rho0,
                                                   std::span<const double> dy, double dt);

/// Sums consecutive groups of `factor` increments (fine grid to coarse grid).
std::vector<double> coarsen_increments(std::span<const double> fine, int factor);

}  // namespace qpf
