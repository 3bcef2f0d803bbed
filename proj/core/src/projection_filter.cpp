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

#include "qpf/projection_filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpf/quantum_filter.hpp"
#include "qpf/stratonovich_taylor.hpp"

namespace qpf {
namespace {

const Complex kI{0.0, 1.0};

RealVector trace_pairing(const Chart& chart, const ComplexMatrix& x) {
  RealVector out(chart.dim_m());
  for (int j = 0; j < chart.dim_m(); ++j) out[j] = trace_product_real(x, chart.generator(j));
  return out;
}

// Tr(rho L_LH(A_j)) for every generator.
RealVector lindblad_pairing(const Chart& chart, const ChartPoint& point,
                            const SystemModel& model) {
  RealVector out(chart.dim_m());
  for (int j = 0; j < chart.dim_m(); ++j) {
    out[j] = trace_product_real(point.rho_bar, lindblad(model, chart.generator(j)));
  }
  return out;
}

// Literal coordinate form of the diffusion numerator Tr(rho (A_j L + L^dag A_j)).
RealVector diffusion_numerator(const Chart& chart, const ChartPoint& point,
                               const SystemModel& model) {
  RealVector out(chart.dim_m());
  for (int j = 0; j < chart.dim_m(); ++j) {
    const ComplexMatrix& a = chart.generator(j);
    out[j] = trace_product_real(point.rho_bar,
                                a * model.coupling() + model.coupling_adjoint() * a);
  }
  return out;
}

RealVector quadratic_delta_terms(const Chart& chart, const ChartPoint& point,
                                 const RealVector& g) {
  RealVector out(chart.dim_m());
  for (int j = 0; j < chart.dim_m(); ++j) out[j] = g.dot(delta_matrix(chart, point, j) * g);
  return out;
}

void require_chart_model(const Chart& chart, const SystemModel& model) {
  if (chart.dim_n() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "chart dimension " + std::to_string(chart.dim_n()) +
                    " does not match model dimension " + std::to_string(model.dim()));
  }
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::NewStratonovich: return "NewStratonovich";
    case Variant::NewIto: return "NewIto";
    case Variant::Baseline: return "Baseline";
    case Variant::Corollary42: return "Corollary42";
  }
  return "Unknown";
}

std::string_view short_name(Variant v) noexcept {
  switch (v) {
    case Variant::NewStratonovich: return "new";
    case Variant::NewIto: return "ito";
    case Variant::Baseline: return "old";
    case Variant::Corollary42: return "corollary";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  for (auto v : {Variant::NewStratonovich, Variant::NewIto, Variant::Baseline,
                 Variant::Corollary42}) {
    if (name == short_name(v) || name == to_string(v)) return v;
  }
  return std::nullopt;
}

SpectralData spectral_decomposition(const ComplexMatrix& coupling, const Tolerances& tol) {
  require_square(coupling, "spectral_decomposition");
  const double defect = hermiticity_defect(coupling);
  if (defect > tol.state_hermitian * std::max(1.0, coupling.norm())) {
    throw Error(ErrorCode::NotSelfAdjoint, "coupling operator is not self-adjoint", defect);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(coupling));
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const int n = static_cast<int>(coupling.rows());
  SpectralData out;
  int i = 0;
  while (i < n) {
    int j = i;
    double sum = 0.0;
    ComplexMatrix projector = ComplexMatrix::Zero(n, n);
    // eigenvalues arrive sorted, so groups are contiguous
    while (j < n && std::abs(values[j] - values[i]) <= tol.spectral_grouping) {
      projector += vectors.col(j) * vectors.col(j).adjoint();
      sum += values[j];
      ++j;
    }
    const double lambda = sum / (j - i);
    if (std::abs(lambda) > tol.spectral_grouping) {
      out.eigenvalues.push_back(lambda);
      out.projectors.push_back(hermitian_part(projector));
    }
    i = j;
  }
  // Largest eigenvalue first.
  std::reverse(out.eigenvalues.begin(), out.eigenvalues.end());
  std::reverse(out.projectors.begin(), out.projectors.end());
  return out;
}

Chart spectral_chart(const SpectralData& spectral, const ComplexMatrix& base_state) {
  return Chart(spectral.projectors, base_state);
}

RealVector diffusion_coefficient(const Chart& chart, const ChartPoint& point,
                                 const SystemModel& model) {
  return project_coordinates(chart, point, linear_diffusion(model, point.rho_bar));
}

RealMatrix diffusion_jacobian(const Chart& chart, const ChartPoint& point,
                              const SystemModel& model, const RealVector& g) {
  const int m = chart.dim_m();
  RealMatrix jac(m, m);
  for (int i = 0; i < m; ++i) {
    const ComplexMatrix& d_i = point.tangent[static_cast<std::size_t>(i)];
    RealVector db(m);
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix& a = chart.generator(j);
      db[j] = trace_product_real(d_i, a * model.coupling() + model.coupling_adjoint() * a);
    }
    jac.col(i) = point.fisher.solve(db - fisher_derivative(chart, point, i) * g);
  }
  return jac;
}

RealMatrix delta_matrix(const Chart& chart, const ChartPoint& point, int j) {
  const int m = chart.dim_m();
  RealMatrix out(m, m);
  const ComplexMatrix rho_aj = point.rho_bar * chart.generator(j);
  for (int p = 0; p < m; ++p) {
    for (int q = p; q < m; ++q) {
      // Tr(rho A_j A_p A_q), equal to Tr(rho A_p A_q A_j) for commuting generators
      out(p, q) = out(q, p) =
          trace_product_real(rho_aj, chart.generator(p) * chart.generator(q));
    }
  }
  return out;
}

CoefficientSet new_coefficients_abstract(const Chart& chart, const ChartPoint& point,
                                         const SystemModel& model) {
  require_chart_model(chart, model);
  CoefficientSet out;
  out.variant = Variant::NewStratonovich;
  out.g = diffusion_coefficient(chart, point, model);
  ProjectedField field{RealVector::Zero(chart.dim_m()), out.g,
                       diffusion_jacobian(chart, point, model, out.g)};
  const ComplexMatrix second = l_operator(MultiIndex{1, 1}, chart, point, field);
  out.f = project_coordinates(chart, point,
                              adjoint_lindblad(model, point.rho_bar) - 0.5 * second);
  return out;
}

CoefficientSet new_coefficients_abstract(const Chart& chart, const ThetaPoint& theta,
                                         const SystemModel& model) {
  return new_coefficients_abstract(chart, evaluate_chart(chart, theta), model);
}

CoefficientSet new_coefficients_coordinates(const Chart& chart, const ChartPoint& point,
                                            const SystemModel& model) {
  require_chart_model(chart, model);
  CoefficientSet out;
  out.variant = Variant::NewStratonovich;
  out.g = point.fisher.solve(diffusion_numerator(chart, point, model));
  const RealMatrix jac = diffusion_jacobian(chart, point, model, out.g);
  out.psi = lindblad_pairing(chart, point, model) + jac * out.g -
            0.5 * quadratic_delta_terms(chart, point, out.g);
  out.f = point.fisher.solve(out.psi);
  return out;
}

CoefficientSet new_coefficients_coordinates(const Chart& chart, const ThetaPoint& theta,
                                            const SystemModel& model) {
  return new_coefficients_coordinates(chart, evaluate_chart(chart, theta), model);
}

CoefficientSet ito_coefficients(const Chart& chart, const ChartPoint& point,
                                const SystemModel& model) {
  require_chart_model(chart, model);
  CoefficientSet out;
  out.variant = Variant::NewIto;
  out.g = diffusion_coefficient(chart, point, model);
  out.gamma = lindblad_pairing(chart, point, model) -
              0.5 * quadratic_delta_terms(chart, point, out.g);
  out.f = point.fisher.solve(out.gamma);
  return out;
}

CoefficientSet ito_coefficients(const Chart& chart, const ThetaPoint& theta,
                                const SystemModel& model) {
  return ito_coefficients(chart, evaluate_chart(chart, theta), model);
}

CoefficientSet baseline_coefficients(const Chart& chart, const ChartPoint& point,
                                     const SystemModel& model) {
  require_chart_model(chart, model);
  CoefficientSet out;
  out.variant = Variant::Baseline;
  out.g = diffusion_coefficient(chart, point, model);
  out.f = project_coordinates(chart, point, linear_drift(model, point.rho_bar));
  return out;
}

CoefficientSet baseline_coefficients(const Chart& chart, const ThetaPoint& theta,
                                     const SystemModel& model) {
  return baseline_coefficients(chart, evaluate_chart(chart, theta), model);
}

CoefficientSet corollary42_coefficients(const SpectralData& spectral, const Chart& chart,
                                        const ChartPoint& point, const SystemModel& model) {
  require_chart_model(chart, model);
  const double defect = hermiticity_defect(model.coupling());
  if (defect > kTolerances.state_hermitian * std::max(1.0, model.coupling().norm())) {
    throw Error(ErrorCode::NotSelfAdjoint, "closed form requires a self-adjoint coupling",
                defect);
  }
  const int m = spectral.count();
  if (chart.dim_m() != m) {
    throw Error(ErrorCode::InvalidArgument,
                "chart must have one generator per nonzero eigenvalue of L", chart.dim_m());
  }
  for (int i = 0; i < m; ++i) {
    const double gap = (chart.generator(i) - spectral.projectors[static_cast<std::size_t>(i)]).norm();
    if (gap > 1e-10) {
      throw Error(ErrorCode::InvalidArgument,
                  "chart generator " + std::to_string(i) + " is not the spectral projector",
                  gap);
    }
  }
  CoefficientSet out;
  out.variant = Variant::Corollary42;
  out.g.resize(m);
  out.xi.resize(m);
  out.phi.resize(m);
  for (int i = 0; i < m; ++i) {
    const double lambda = spectral.eigenvalues[static_cast<std::size_t>(i)];
    out.g[i] = 2.0 * lambda;
    out.xi[i] = lambda * lambda;
    out.phi[i] = (kI * point.rho_bar * commutator(model.hamiltonian(), chart.generator(i)))
                     .trace()
                     .real();
  }
  out.f = point.fisher.solve(out.phi) - 2.0 * out.xi;
  return out;
}

CoefficientSet corollary42_coefficients(const SpectralData& spectral, const Chart& chart,
                                        const ThetaPoint& theta, const SystemModel& model) {
  return corollary42_coefficients(spectral, chart, evaluate_chart(chart, theta), model);
}

double first_order_residual(const Chart& chart, const ChartPoint& point,
                            const SystemModel& model) {
  const RealVector g = diffusion_coefficient(chart, point, model);
  return (tangent_combination(point, g) - linear_diffusion(model, point.rho_bar)).norm();
}

DriftDiscrepancy drift_discrepancy(const Chart& chart, const ThetaPoint& theta,
                                   const SystemModel& model) {
  const ChartPoint point = evaluate_chart(chart, theta);
  DriftDiscrepancy out;
  const CoefficientSet abstract = new_coefficients_abstract(chart, point, model);
  out.abstract_f = abstract.f;
  out.coordinate_f = new_coefficients_coordinates(chart, point, model).f;
  out.max_abs_difference = (out.abstract_f - out.coordinate_f).cwiseAbs().maxCoeff();
  out.relative_difference =
      (out.abstract_f - out.coordinate_f).norm() / std::max(1e-300, out.abstract_f.norm());

  ProjectedField field{RealVector::Zero(chart.dim_m()), abstract.g,
                       diffusion_jacobian(chart, point, model, abstract.g)};
  const ComplexMatrix nu = adjoint_lindblad(model, point.rho_bar) -
                           0.5 * l_operator(MultiIndex{1, 1}, chart, point, field);
  const RealVector residual = trace_pairing(chart, nu - tangent_combination(point, abstract.f));
  out.normal_equation_residual = residual.cwiseAbs().maxCoeff();
  return out;
}

ProjectionFilter::ProjectionFilter(const Chart& chart, const SystemModel& model,
                                   Variant variant)
    : chart_(&chart), model_(&model), variant_(variant) {
  require_chart_model(chart, model);
  if (variant_ == Variant::Corollary42) spectral_ = spectral_decomposition(model.coupling());
}

CoefficientSet ProjectionFilter::coefficients(const ThetaPoint& theta) const {
  const ChartPoint point = evaluate_chart(*chart_, theta);
  switch (variant_) {
    case Variant::NewStratonovich: return new_coefficients_abstract(*chart_, point, *model_);
    case Variant::NewIto: return ito_coefficients(*chart_, point, *model_);
    case Variant::Baseline: return baseline_coefficients(*chart_, point, *model_);
    case Variant::Corollary42:
      return corollary42_coefficients(*spectral_, *chart_, point, *model_);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown variant");
}

RealVector ProjectionFilter::step(const RealVector& theta, double dy, double dt) const {
  const CoefficientSet c0 = coefficients(ThetaPoint(theta, chart_->tolerances()));
  if (variant_ == Variant::NewIto) return theta + c0.f * dt + c0.g * dy;
  const RealVector predictor = theta + c0.f * dt + c0.g * dy;
  const CoefficientSet c1 = coefficients(ThetaPoint(predictor, chart_->tolerances()));
  return theta + 0.5 * (c0.f + c1.f) * dt + 0.5 * (c0.g + c1.g) * dy;
}

FilterTrajectory integrate_projection_filter(const Chart& chart, const SystemModel& model,
                                             Variant variant, std::span<const double> dy,
                                             double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive", dt);
  const ProjectionFilter filter(chart, model, variant);
  FilterTrajectory out;
  out.label = std::string(short_name(variant));
  out.dt = dt;
  out.times.reserve(dy.size() + 1);
  out.theta.reserve(dy.size() + 1);
  out.observations.assign(dy.begin(), dy.end());
  RealVector theta = RealVector::Zero(chart.dim_m());
  out.times.push_back(0.0);
  out.theta.push_back(theta);
  for (std::size_t j = 0; j < dy.size(); ++j) {
    try {
      theta = filter.step(theta, dy[j], dt);
    } catch (const Error& e) {
      throw Error(e.code(),
                  e.message() + " (projection filter '" + out.label +
                      "' at t=" + std::to_string(static_cast<double>(j) * dt) + ")",
                  e.defect());
    }
    out.times.push_back(static_cast<double>(j + 1) * dt);
    out.theta.push_back(theta);
  }
  return out;
}

ComplexMatrix normalized_chart_state(const Chart& chart, const RealVector& theta) {
  const ComplexMatrix rho = chart_state(chart, ThetaPoint(theta, chart.tolerances())).matrix();
  return rho / rho.trace().real();
}

}  // namespace qpf
