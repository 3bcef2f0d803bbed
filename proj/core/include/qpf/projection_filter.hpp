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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpf/manifold_geometry.hpp"
#include "qpf/operator_algebra.hpp"

namespace qpf {

/// Which drift/diffusion pair drives the chart coordinates.
enum class Variant {
  // Taylor-optimal drift, Stratonovich form (Heun).
  NewStratonovich,
  // Same filter in Ito form (Euler-Maruyama).
  NewIto,
  // Projection of the linear-filter drift (Heun).
  Baseline,
  // Closed form for self-adjoint coupling with spectral-projector charts (Heun).
  Corollary42,
};

std::string_view to_string(Variant v) noexcept;
/// Short CLI names: new, ito, old, corollary.
std::string_view short_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;

/// Drift f and diffusion g in chart coordinates, plus the intermediate
/// vectors of the coordinate formulas for whichever variant produced them:
/// psi (new, coordinate route), gamma (Ito drift numerator), phi and xi
/// (self-adjoint closed form). Unused ones are empty.
struct CoefficientSet {
  Variant variant = Variant::NewStratonovich;
  RealVector f;
  RealVector g;
  RealVector psi;
  RealVector gamma;
  RealVector phi;
  RealVector xi;
};

/// Nonzero spectrum of a self-adjoint coupling grouped into projectors.
struct SpectralData {
  // Distinct nonzero eigenvalues, largest first.
  std::vector<double> eigenvalues;
  std::vector<ComplexMatrix> projectors;
  int count() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Throws NotSelfAdjoint when L != L^dag.
SpectralData spectral_decomposition(const ComplexMatrix& coupling,
                                    const Tolerances& tol = kTolerances);

/// Chart whose generators are the spectral projectors of a self-adjoint L.
Chart spectral_chart(const SpectralData& spectral, const ComplexMatrix& base_state);

/// g = R^{-1} [Tr(rho_theta (A_j L + L^dag A_j))]_j, the projection of
/// L rho + rho L^dag. Shared by every variant.
RealVector diffusion_coefficient(const Chart& chart, const ChartPoint& point,
                                 const SystemModel& model);

/// Analytic d g_p / d theta_q:
///   dg/dtheta_i = R^{-1} (db/dtheta_i - (dR/dtheta_i) g).
RealMatrix diffusion_jacobian(const Chart& chart, const ChartPoint& point,
                              const SystemModel& model, const RealVector& g);

/// Taylor-optimal filter from the abstract projections: g projects
/// L rho + rho L^dag, f projects L^dag_LH(rho) - L^1(L^1(rho))/2 where the
/// second-order chart differentiator uses g and its Jacobian.
CoefficientSet new_coefficients_abstract(const Chart& chart, const ThetaPoint& theta,
                                         const SystemModel& model);
CoefficientSet new_coefficients_abstract(const Chart& chart, const ChartPoint& point,
                                         const SystemModel& model);

/// Explicit coordinate formulas: g as above, f = R^{-1} psi with
///   psi_j = Tr(rho L_LH(A_j)) + (d g_j / d theta) . g - g^T Delta_j g / 2,
///   Delta_j(p, q) = Tr(rho A_p A_q A_j).
/// Implemented literally; its drift is checked against the abstract route
/// by drift_discrepancy().
CoefficientSet new_coefficients_coordinates(const Chart& chart, const ThetaPoint& theta,
                                            const SystemModel& model);
CoefficientSet new_coefficients_coordinates(const Chart& chart, const ChartPoint& point,
                                            const SystemModel& model);

/// Delta_j(p, q) = Tr(rho A_p A_q A_j)
RealMatrix delta_matrix(const Chart& chart, const ChartPoint& point, int j);

/// Ito drift fbar = R^{-1} gamma, gamma_j = Tr(rho L_LH(A_j)) - g^T Delta_j g / 2.
CoefficientSet ito_coefficients(const Chart& chart, const ThetaPoint& theta,
                                const SystemModel& model);
CoefficientSet ito_coefficients(const Chart& chart, const ChartPoint& point,
                                const SystemModel& model);

/// Baseline projection filter: f projects the linear drift
/// -i[H, rho] - S_L(rho); g as above.
CoefficientSet baseline_coefficients(const Chart& chart, const ThetaPoint& theta,
                                     const SystemModel& model);
CoefficientSet baseline_coefficients(const Chart& chart, const ChartPoint& point,
                                     const SystemModel& model);

/// Closed form for L = L^dag and A_i the spectral projectors of L:
/// g = 2 lambda, f = R^{-1} phi - 2 xi with phi_j = Tr(i rho [H, A_j]) and
/// xi = lambda^2.
CoefficientSet corollary42_coefficients(const SpectralData& spectral, const Chart& chart,
                                        const ThetaPoint& theta, const SystemModel& model);
CoefficientSet corollary42_coefficients(const SpectralData& spectral, const Chart& chart,
                                        const ChartPoint& point, const SystemModel& model);

/// ||L^1(rho_theta) - D^1(rho_theta)||_F, the first-order mismatch between the
/// chart diffusion and the true diffusion.
double first_order_residual(const Chart& chart, const ChartPoint& point,
                            const SystemModel& model);

/// Gap between the abstract (normative) drift and the literal coordinate
/// formula, with the normal-equation residual of the abstract projection.
struct DriftDiscrepancy {
  RealVector abstract_f;
  RealVector coordinate_f;
  double max_abs_difference = 0.0;
  double relative_difference = 0.0;
  // max_j |Tr((nu - Pi nu) A_j)| for the projected drift operator nu.
  double normal_equation_residual = 0.0;
};

DriftDiscrepancy drift_discrepancy(const Chart& chart, const ThetaPoint& theta,
                                   const SystemModel& model);

/// Projection filter for one variant; caches spectral data when needed.
class ProjectionFilter {
 public:
  ProjectionFilter(const Chart& chart, const SystemModel& model, Variant variant);

  Variant variant() const noexcept { return variant_; }
  const Chart& chart() const noexcept { return *chart_; }
  CoefficientSet coefficients(const ThetaPoint& theta) const;

  /// One step driven by the record increment dy: Heun for Stratonovich
  /// variants, Euler-Maruyama for NewIto.
  RealVector step(const RealVector& theta, double dy, double dt) const;

 private:
  const Chart* chart_;
  const SystemModel* model_;
  Variant variant_;
  std::optional<SpectralData> spectral_;
};

struct FilterTrajectory {
  std::string label;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> observations;
  // Projection filters fill theta; full filters fill states.
  std::vector<RealVector> theta;
  std::vector<ComplexMatrix> states;
};

/// Integrates theta from 0 over the observation record dy (one increment per
/// step of size dt). Stops with the failing Error (carrying the failure
/// time in its message) on SingularMetric or OverflowGuard.
FilterTrajectory integrate_projection_filter(const Chart& chart, const SystemModel& model,
                                             Variant variant, std::span<const double> dy,
                                             double dt);

/// rho_theta / Tr(rho_theta)
ComplexMatrix normalized_chart_state(const Chart& chart, const RealVector& theta);

}  // namespace qpf
