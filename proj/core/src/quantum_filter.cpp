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

#include "qpf/quantum_filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpf {
namespace {
const Complex kI{0.0, 1.0};
}  // namespace

ComplexMatrix linear_drift(const SystemModel& model, const ComplexMatrix& rho_bar) {
  const ComplexMatrix& h = model.hamiltonian();
  return -kI * (h * rho_bar - rho_bar * h) - stratonovich_drift_correction(model, rho_bar);
}

ComplexMatrix linear_diffusion(const SystemModel& model, const ComplexMatrix& rho_bar) {
  require_same_shape(model.hamiltonian(), rho_bar, "linear_diffusion");
  return model.coupling() * rho_bar + rho_bar * model.coupling_adjoint();
}

double observation_increment(const DensityState& rho, const SystemModel& model, double dw,
                             double dt) {
  return trace_product_real(rho.matrix(), model.coupling_quadrature()) * dt + dw;
}

DensityState sme_ito_step(const DensityState& rho, const SystemModel& model, double dy,
                          double dt) {
  const ComplexMatrix& r = rho.matrix();
  require_same_shape(model.hamiltonian(), r, "sme_ito_step");
  const int n = model.dim();
  const ComplexMatrix& l = model.coupling();
  const ComplexMatrix kraus = ComplexMatrix::Identity(n, n) -
                              (kI * model.hamiltonian() + 0.5 * model.coupling_number()) * dt +
                              l * dy + (0.5 * (dy * dy - dt)) * (l * l);
  const ComplexMatrix next = hermitian_part(kraus * r * kraus.adjoint());
  const double tr = next.trace().real();
  if (!(tr > kTolerances.trace_floor)) {
    throw Error(ErrorCode::NonPositiveTrace, "quantum filter step lost its trace", tr);
  }
  return DensityState(next / tr);
}

ComplexMatrix sme_euler_maruyama_step(const ComplexMatrix& r, const SystemModel& model,
                                      double dy, double dt) {
  require_same_shape(model.hamiltonian(), r, "sme_euler_maruyama_step");
  const double expect = trace_product_real(r, model.coupling_quadrature());
  const ComplexMatrix innovation_gain =
      model.coupling() * r + r * model.coupling_adjoint() - expect * r;
  const ComplexMatrix next = hermitian_part(r + adjoint_lindblad(model, r) * dt +
                                            innovation_gain * (dy - expect * dt));
  const double tr = next.trace().real();
  if (!(tr > kTolerances.trace_floor)) {
    throw Error(ErrorCode::NonPositiveTrace, "quantum filter step lost its trace", tr);
  }
  return next / tr;
}

ComplexMatrix heun_linear_step(const ComplexMatrix& rho_bar, const SystemModel& model,
                               double dy, double dt) {
  const ComplexMatrix a0 = linear_drift(model, rho_bar);
  const ComplexMatrix b0 = linear_diffusion(model, rho_bar);
  const ComplexMatrix predictor = rho_bar + a0 * dt + b0 * dy;
  const ComplexMatrix a1 = linear_drift(model, predictor);
  const ComplexMatrix b1 = linear_diffusion(model, predictor);
  return hermitian_part(rho_bar + 0.5 * (a0 + a1) * dt + 0.5 * (b0 + b1) * dy);
}

UnnormalizedState linear_stratonovich_step(const UnnormalizedState& rho_bar,
                                           const SystemModel& model, double dy, double dt) {
  return UnnormalizedState(heun_linear_step(rho_bar.matrix(), model, dy, dt));
}

namespace {

SmeTrajectory run_sme(const SystemModel& model, const DensityState& rho0,
                      std::span<const double> noise, double dt, bool noise_is_record) {
  SmeTrajectory out;
  out.dt = dt;
  out.states.reserve(noise.size() + 1);
  out.observations.reserve(noise.size());
  out.states.push_back(rho0.matrix());
  out.min_eigenvalue = min_eigenvalue(rho0.matrix());
  DensityState rho = rho0;
  for (std::size_t j = 0; j < noise.size(); ++j) {
    const double dy = noise_is_record ? noise[j] : observation_increment(rho, model, noise[j], dt);
    rho = sme_ito_step(rho, model, dy, dt);
    out.observations.push_back(dy);
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(rho.matrix()));
    out.max_trace_defect =
        std::max(out.max_trace_defect, std::abs(rho.matrix().trace().real() - 1.0));
    out.states.push_back(rho.matrix());
  }
  return out;
}

}  // namespace

SmeTrajectory integrate_sme(const SystemModel& model, const DensityState& rho0,
                            std::span<const double> dw, double dt) {
  return run_sme(model, rho0, dw, dt, false);
}

SmeTrajectory integrate_sme_given_record(const SystemModel& model, const DensityState& rho0,
                                         std::span<const double> dy, double dt) {
  return run_sme(model, rho0, dy, dt, true);
}

std::vector<ComplexMatrix> integrate_linear_filter(const SystemModel& model,
                                                   const ComplexMatrix& rho0,
                                                   std::span<const double> dy, double dt) {
  std::vector<ComplexMatrix> out;
  out.reserve(dy.size() + 1);
  out.push_back(rho0);
  for (double inc : dy) out.push_back(heun_linear_step(out.back(), model, inc, dt));
  return out;
}

std::vector<double> coarsen_increments(std::span<const double> fine, int factor) {
  if (factor < 1 || fine.size() % static_cast<std::size_t>(factor) != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot group " + std::to_string(fine.size()) + " increments by " +
                    std::to_string(factor));
  }
  std::vector<double> out(fine.size() / static_cast<std::size_t>(factor), 0.0);
  for (std::size_t i = 0; i < fine.size(); ++i) out[i / static_cast<std::size_t>(factor)] += fine[i];
  return out;
}

}  // namespace qpf
