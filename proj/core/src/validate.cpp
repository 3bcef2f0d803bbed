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


#include "qpf/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "qpf/multi_index.hpp"
#include "qpf/projection_filter.hpp"
#include "qpf/quantum_filter.hpp"
#include "qpf/random.hpp"

namespace qpf {
namespace {

struct Context {
  const Scenario& scenario;
  Scenario selfadjoint;
  ValidateOptions options;
};

struct Outcome {
  bool ok = true;
  std::string detail;

  Outcome() = default;
  // Any returned message is a failure reason.
  Outcome(std::string reason) : ok(false), detail(std::move(reason)) {}
  Outcome(const char* reason) : Outcome(std::string(reason)) {}
  static Outcome pass(std::string note) {
    Outcome o;
    o.detail = std::move(note);
    return o;
  }
};

using CheckFn = std::function<Outcome(const Context&)>;

std::vector<RealVector> random_points(int m, int count, std::uint64_t seed, double bound) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<RealVector> out;
  for (int i = 0; i < count; ++i) {
    RealVector t(m);
    for (int k = 0; k < m; ++k) t[k] = u(rng);
    out.push_back(std::move(t));
  }
  return out;
}

double relative_gap(const RealVector& a, const RealVector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

Chart faulty_chart(const Chart& chart) {
  auto gens = chart.generators();
  if (gens.size() >= 2) gens[1] = gens[0];
  return Chart(std::move(gens), chart.base_state());
}

Outcome check_remainder_recursion(const Context& ctx) {
  for (int j = 0; j <= 6; ++j) {
    const MultiIndexSet lambda_j = lambda_set(j);
    const MultiIndexSet lambda_next = lambda_set(j + 1);
    MultiIndexSet built;
    if (ctx.options.fault == Fault::RemainderRule) {
      const MultiIndexSet shell = set_difference(lambda_next, lambda_j);
      std::vector<MultiIndex> extended;
      for (const auto& alpha : shell) extended.push_back(concat(MultiIndex{1}, alpha));
      built = set_union(set_difference(remainder_set(j), shell), MultiIndexSet(extended));
    } else {
      built = remainder_recursion_step(remainder_set(j), lambda_j, lambda_next);
    }
    if (!(built == remainder_set(j + 1))) {
      return fmt::format("recursion from j={} gives {} but R(Lambda_{}) = {}", j, built.to_string(),
                         j + 1, remainder_set(j + 1).to_string());
    }
  }
  return {};
}

Outcome check_remainder_bound(const Context&) {
  for (int k = 0; k <= 8; ++k) {
    const std::size_t n = remainder_set(k).size();
    if (n > (std::size_t{1} << (k + 1))) {
      return fmt::format("|R(Lambda_{})| = {} exceeds 2^{}", k, n, k + 1);
    }
  }
  return {};
}

Outcome check_fisher_spd(const Context& ctx) {
  const Chart chart = ctx.options.fault == Fault::DuplicateGenerator
                          ? faulty_chart(ctx.scenario.chart)
                          : ctx.scenario.chart;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed, 2.0)) {
    try {
      const FisherMatrix r = fisher_matrix(chart, ThetaPoint(t));
      if (!(r.min_eigenvalue() > 0.0)) return fmt::format("min eigenvalue {}", r.min_eigenvalue());
    } catch (const Error& e) {
      return fmt::format("{} at theta with |theta|_inf = {:.3g}", e.what(), t.cwiseAbs().maxCoeff());
    }
  }
  return {};
}

Outcome check_metric_consistency(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 1, 2.0)) {
    const ChartPoint p = evaluate_chart(chart, ThetaPoint(t));
    for (int i = 0; i < chart.dim_m(); ++i) {
      for (int j = 0; j < chart.dim_m(); ++j) {
        const double direct =
            trace_product_real(p.rho_bar, chart.generator(i) * chart.generator(j));
        if (std::abs(p.fisher.entries()(i, j) - direct) > 1e-12 * std::max(1.0, std::abs(direct))) {
          return fmt::format("r_{}{} = {} but Tr(rho A_i A_j) = {}", i, j, p.fisher.entries()(i, j),
                             direct);
        }
      }
    }
  }
  return {};
}

Outcome check_diffusion_routes(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 2, 2.0)) {
    const ChartPoint p = evaluate_chart(chart, ThetaPoint(t));
    const RealVector a = new_coefficients_abstract(chart, p, ctx.scenario.model).g;
    const RealVector c = new_coefficients_coordinates(chart, p, ctx.scenario.model).g;
    if (relative_gap(c, a) > 1e-9) return fmt::format("relative gap {:.3g}", relative_gap(c, a));
  }
  return {};
}

Outcome check_jacobian(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  const SystemModel& model = ctx.scenario.model;
  const double h = 1e-5;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 3, 2.0)) {
    const ChartPoint p = evaluate_chart(chart, ThetaPoint(t));
    const RealVector g = diffusion_coefficient(chart, p, model);
    const RealMatrix analytic = diffusion_jacobian(chart, p, model, g);
    RealMatrix fd(chart.dim_m(), chart.dim_m());
    for (int q = 0; q < chart.dim_m(); ++q) {
      RealVector tp = t, tm = t;
      tp[q] += h;
      tm[q] -= h;
      fd.col(q) = (diffusion_coefficient(chart, evaluate_chart(chart, ThetaPoint(tp)), model) -
                   diffusion_coefficient(chart, evaluate_chart(chart, ThetaPoint(tm)), model)) /
                  (2 * h);
    }
    const double gap = (analytic - fd).norm() / std::max(1.0, analytic.norm());
    if (gap > 1e-5) return fmt::format("relative gap {:.3g}", gap);
  }
  return {};
}

Outcome check_drift_discrepancy(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  double worst_gap = 0.0;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 4, 2.0)) {
    const DriftDiscrepancy d = drift_discrepancy(chart, ThetaPoint(t), ctx.scenario.model);
    if (!std::isfinite(d.max_abs_difference)) return "non-finite discrepancy";
    if (d.normal_equation_residual > 1e-9) {
      return fmt::format("normal equations violated by {:.3g}", d.normal_equation_residual);
    }
    worst_gap = std::max(worst_gap, d.max_abs_difference);
  }
  return Outcome::pass(fmt::format("max |f_abstract - f_coordinate| = {:.3g}", worst_gap));
}

Outcome check_ito_conversion(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  const SystemModel& model = ctx.scenario.model;
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 5, 2.0)) {
    const ChartPoint p = evaluate_chart(chart, ThetaPoint(t));
    const CoefficientSet s = new_coefficients_abstract(chart, p, model);
    const CoefficientSet i = ito_coefficients(chart, p, model);
    const RealVector expected = s.f + 0.5 * diffusion_jacobian(chart, p, model, s.g) * s.g;
    if (relative_gap(i.f, expected) > 1e-9) {
      return fmt::format("relative gap {:.3g}", relative_gap(i.f, expected));
    }
  }
  return {};
}

Outcome check_selfadjoint_reduction(const Context& ctx) {
  const SystemModel& model = ctx.selfadjoint.model;
  const SpectralData spectral = spectral_decomposition(model.coupling());
  const Chart chart = spectral_chart(spectral, ctx.selfadjoint.chart.base_state());
  for (const auto& t : random_points(chart.dim_m(), ctx.options.samples, ctx.options.seed + 6, 2.0)) {
    const ChartPoint p = evaluate_chart(chart, ThetaPoint(t));
    const CoefficientSet closed = corollary42_coefficients(spectral, chart, p, model);
    const CoefficientSet fresh = new_coefficients_abstract(chart, p, model);
    const CoefficientSet base = baseline_coefficients(chart, p, model);
    if (relative_gap(fresh.g, closed.g) > 1e-10 || relative_gap(fresh.f, closed.f) > 1e-10) {
      return "new coefficients differ from the closed form";
    }
    if (relative_gap(base.f, fresh.f) > 1e-10) return "baseline drift differs from new drift";
    const double r = first_order_residual(chart, p, model);
    if (r > 1e-10) return fmt::format("first-order residual {:.3g}", r);
  }
  return {};
}

Outcome check_state_dimension(const Context& ctx) {
  const Chart& chart = ctx.scenario.chart;
  const int n = chart.dim_n();
  // A Hermitian unit-trace n x n matrix: n real diagonal entries, n(n-1)/2
  // complex upper entries, one trace constraint.
  const int density_dof = n + n * (n - 1) - 1;
  const ProjectionFilter filter(chart, ctx.scenario.model, Variant::NewStratonovich);
  const RealVector theta = filter.step(RealVector::Zero(chart.dim_m()), 0.0, 1e-3);
  if (theta.size() != chart.dim_m()) return "filter state length differs from chart dimension";
  if (n == 4 && (theta.size() != 4 || density_dof != 15)) {
    return fmt::format("projection state {} vs density {} (expected 4 vs 15)", theta.size(),
                       density_dof);
  }
  if (theta.size() >= density_dof) return "projection filter is not smaller than the full filter";
  return {};
}

Outcome check_sme_invariants(const Context& ctx) {
  const Scenario& s = ctx.scenario;
  for (std::uint32_t path = 0; path < 4; ++path) {
    const NoiseStream noise(ctx.options.seed, StreamKind::Validation, path);
    const auto dw = coarsen_increments(
        noise.wiener_increments(static_cast<std::size_t>(s.fine_steps()), s.fine_step()), s.substeps);
    const SmeTrajectory traj = integrate_sme(s.model, DensityState(s.chart.base_state()), dw, s.step());
    for (const auto& rho : traj.states) {
      const double tr_defect = std::abs(rho.trace().real() - 1.0);
      const double lo = min_eigenvalue(rho);
      if (tr_defect > 1e-8 || lo < -1e-8) {
        return fmt::format("path {}: trace defect {:.3g}, min eigenvalue {:.3g}", path, tr_defect, lo);
      }
    }
  }
  return {};
}

Outcome check_diagonal_equivalence(const Context& ctx) {
  const Scenario& s = ctx.selfadjoint;
  const NoiseStream noise(ctx.options.seed, StreamKind::Validation, 100);
  const auto dw = coarsen_increments(
      noise.wiener_increments(static_cast<std::size_t>(s.fine_steps()), s.fine_step()), s.substeps);
  const SmeTrajectory truth = integrate_sme(s.model, DensityState(s.chart.base_state()), dw, s.step());
  const auto a = integrate_projection_filter(s.chart, s.model, Variant::NewStratonovich,
                                             truth.observations, s.step());
  const auto b = integrate_projection_filter(s.chart, s.model, Variant::Baseline,
                                             truth.observations, s.step());
  for (std::size_t j = 0; j < a.theta.size(); ++j) {
    const double gap = (a.theta[j] - b.theta[j]).cwiseAbs().maxCoeff();
    if (gap > 1e-9) return fmt::format("theta differs by {:.3g} at t={}", gap, a.times[j]);
  }
  return {};
}

const std::vector<std::pair<const char*, CheckFn>>& registry() {
  static const std::vector<std::pair<const char*, CheckFn>> checks = {
      {"appendix-recursion", check_remainder_recursion},
      {"remainder-bound", check_remainder_bound},
      {"fisher-spd", check_fisher_spd},
      {"metric-consistency", check_metric_consistency},
      {"diffusion-routes", check_diffusion_routes},
      {"diffusion-jacobian", check_jacobian},
      {"drift-discrepancy", check_drift_discrepancy},
      {"ito-conversion", check_ito_conversion},
      {"selfadjoint-reduction", check_selfadjoint_reduction},
      {"diagonal-equivalence", check_diagonal_equivalence},
      {"state-dimension", check_state_dimension},
      {"sme-invariants", check_sme_invariants},
  };
  return checks;
}

}  // namespace

std::optional<Fault> parse_fault(std::string_view name) noexcept {
  if (name == "none") return Fault::None;
  if (name == "remainder-rule") return Fault::RemainderRule;
  if (name == "duplicate-generator") return Fault::DuplicateGenerator;
  return std::nullopt;
}

bool ValidationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

ValidationReport run_validate(const Scenario& scenario, const ValidateOptions& options) {
  const Context ctx{scenario, four_level_scenario(0.0), options};
  ValidationReport report;
  for (const auto& [name, fn] : registry()) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o = fn(ctx);
      r.passed = o.ok;
      r.detail = std::move(o.detail);
    } catch (const Error& e) {
      r.passed = false;
      r.detail = e.what();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(r));
  }
  return report;
}

std::string format_validation(const ValidationReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    out += fmt::format("{:<24} {}  {:7.3f}s", c.name, c.passed ? "PASS" : "FAIL", c.seconds);
    if (!c.detail.empty()) out += "  " + c.detail;
    out += '\n';
  }
  out += fmt::format("{} of {} checks passed\n",
                     std::count_if(report.checks.begin(), report.checks.end(),
                                   [](const CheckResult& c) { return c.passed; }),
                     report.checks.size());
  return out;
}

}  // namespace qpf
