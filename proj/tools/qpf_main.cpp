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


// qpf: command line front end for the projection filter experiments.
//
//   qpf compare     [--config F] [--seed S] [--paths N] [--filters new,old] [--out DIR]
//                   [--trace-path P]
//   qpf convergence [--config F] [--seed S] [--paths N] [--order K] [--out DIR]
//   qpf validate    [--config F] [--seed S] [--inject-fault NAME]
//   qpf expand      [--config F] [--seed S] [--order K] [--horizon D]
//
// Exit status: 0 success, 1 runtime failure, 2 validation failure,
// 3 scenario error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qpf/comparison.hpp"
#include "qpf/convergence.hpp"
#include "qpf/multi_index.hpp"
#include "qpf/quantum_filter.hpp"
#include "qpf/random.hpp"
#include "qpf/report.hpp"
#include "qpf/scenario.hpp"
#include "qpf/stratonovich_taylor.hpp"
#include "qpf/validate.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitScenario = 3;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;
  std::string out;
  int workers = 0;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

qpf::Scenario scenario_for(const CommonArgs& args) {
  try {
    if (args.config.empty()) return qpf::load_scenario(qpf::default_scenario_dir() / "four_level.json");
    return qpf::load_scenario(args.config);
  } catch (const qpf::Error& e) {
    throw ScenarioError(e.what());
  }
}

std::vector<qpf::Variant> parse_filters(const std::string& list) {
  std::vector<qpf::Variant> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string name = list.substr(start, comma - start);
    if (!name.empty()) {
      auto v = qpf::parse_variant(name);
      if (!v) throw ScenarioError(fmt::format("filters: unknown filter '{}'", name));
      out.push_back(*v);
    }
    start = comma + 1;
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_compare(const CommonArgs& args, const std::string& filters,
                std::optional<std::uint32_t> trace) {
  const qpf::Scenario scenario = scenario_for(args);
  qpf::ComparisonOptions options;
  options.paths = args.paths;
  options.seed = args.seed;
  options.workers = args.workers;
  if (!filters.empty()) options.filters = parse_filters(filters);

  const auto start = std::chrono::steady_clock::now();
  const qpf::ComparisonReport report = qpf::run_comparison(scenario, options);
  const auto dir = args.out.empty() ? std::filesystem::path("out/compare") : std::filesystem::path(args.out);
  std::vector<qpf::FilterTrajectory> traces;
  if (trace) traces = qpf::trace_path(scenario, report.seed, *trace, report.variants);
  qpf::emit_report(report, dir, traces);

  fmt::print("scenario {} (digest {}), seed {}, {} paths, {:.1f}s\n", report.scenario,
             report.digest, report.seed, report.paths.size(), seconds_since(start));
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    fmt::print("  {:<16} time-averaged distance {:.6f}\n", qpf::to_string(report.variants[v]),
               report.time_average[v]);
  }
  if (report.win_rate) fmt::print("  win rate (new <= old): {:.3f}\n", *report.win_rate);
  fmt::print("  accepted {}, failed {}\n", report.accepted, report.failed);
  for (const auto& p : report.paths) {
    if (!p.accepted) fmt::print("    path {}: {}\n", p.path, p.failure);
  }
  fmt::print("  wrote {}\n", dir.string());
  if (report.run_failed()) {
    fmt::print(stderr, "run failed: {} of {} paths failed (limit 1%)\n", report.failed,
               report.paths.size());
    return kExitRuntime;
  }
  return 0;
}

int cmd_convergence(const CommonArgs& args, std::optional<int> order) {
  const qpf::Scenario scenario = scenario_for(args);
  qpf::ConvergenceRunOptions options;
  if (order) options.orders = {*order};
  options.paths = args.paths;
  options.seed = args.seed;
  options.workers = args.workers;
  const auto start = std::chrono::steady_clock::now();
  const auto results = qpf::run_convergence(scenario, options);
  const auto dir = args.out.empty() ? std::filesystem::path("out/convergence") : std::filesystem::path(args.out);
  qpf::emit_convergence(results, scenario, dir);
  fmt::print("scenario {}, {} paths, {:.1f}s\n", scenario.name,
             results.empty() ? 0 : results.front().paths, seconds_since(start));
  for (const auto& r : results) {
    fmt::print("  k={}  slope {:.3f} (expected {})  moment bound {:.4g}\n", r.order, r.slope,
               r.order + 1, r.moment_bound);
    for (std::size_t i = 0; i < r.horizons.size(); ++i) {
      fmt::print("    delta {:<12.6g} mse {:<12.4e} +- {:<10.2e} bound {:.4e}\n", r.horizons[i],
                 r.mse[i], r.mse_stderr[i], r.bound[i]);
    }
  }
  fmt::print("  wrote {}\n", dir.string());
  return 0;
}

int cmd_validate(const CommonArgs& args, const std::string& fault_name) {
  qpf::ValidateOptions options;
  if (args.seed) options.seed = *args.seed;
  auto fault = qpf::parse_fault(fault_name);
  if (!fault) {
    fmt::print(stderr, "unknown fault '{}' (none, remainder-rule, duplicate-generator)\n", fault_name);
    return kExitValidation;
  }
  options.fault = *fault;
  const qpf::Scenario scenario =
      args.config.empty() ? qpf::four_level_scenario(0.3) : scenario_for(args);
  const qpf::ValidationReport report = qpf::run_validate(scenario, options);
  fmt::print("{}", qpf::format_validation(report));
  if (!report.passed()) {
    for (const auto& name : report.failures()) fmt::print(stderr, "failed: {}\n", name);
    return kExitValidation;
  }
  return 0;
}

int cmd_expand(const CommonArgs& args, int order, double horizon, std::uint32_t path_index) {
  const qpf::Scenario scenario = scenario_for(args);
  const std::uint64_t seed = args.seed.value_or(scenario.seed);
  const int divisions = 64;
  const double h = horizon / divisions;
  const qpf::NoiseStream noise(seed, qpf::StreamKind::Expansion, path_index);
  const qpf::WienerPath path = qpf::WienerPath::sample(noise, 0.0, h, divisions);
  const qpf::ComplexMatrix rho0 = scenario.chart.base_state();
  const qpf::TaylorExpansionResult expansion =
      qpf::taylor_expand_true(scenario.model, rho0, order, path, 0.0, horizon);
  const auto reference = qpf::integrate_linear_filter(scenario.model, rho0, path.increments(), h);

  fmt::print("order {} expansion over [0, {}] (seed {}, path {}), reference step {}\n", order,
             horizon, seed, path_index, h);
  fmt::print("  {:<12} {:>14} {:>14}\n", "alpha", "integral", "|D_alpha|_F");
  for (const auto& [alpha, term] : expansion.terms) {
    fmt::print("  {:<12} {:>14.6e} {:>14.6e}\n", alpha.to_string(), term.integral,
               term.coefficient.norm());
  }
  fmt::print("  error |rho(t) - SE_k|_F = {:.6e}\n", (reference.back() - expansion.value).norm());
  fmt::print("  remainder set {}\n", qpf::remainder_set(order).to_string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection filter experiments for continuously monitored quantum systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qpf::library_version());

  CommonArgs common;
  std::string filters;
  std::string fault = "none";
  int order = 2;
  double horizon = 1.0 / 64;
  std::uint32_t path_index = 0;

  auto add_common = [&](CLI::App* sub, bool with_paths, bool with_out) {
    sub->add_option("--config", common.config, "Scenario JSON (default: bundled four_level.json)");
    sub->add_option("--seed", common.seed, "Master seed (default: scenario seed)");
    if (with_paths) {
      sub->add_option("--paths", common.paths, "Number of Monte Carlo paths")
          ->check(CLI::PositiveNumber);
      sub->add_option("--workers", common.workers, "Worker threads (0 = hardware concurrency)")
          ->check(CLI::NonNegativeNumber);
    }
    if (with_out) sub->add_option("--out", common.out, "Output directory");
  };

  auto* compare = app.add_subcommand("compare", "Projection filters against the quantum filter");
  add_common(compare, true, true);
  compare->add_option("--filters", filters, "Comma-separated list of new, old, ito, corollary");
  std::optional<std::uint32_t> trace_path;
  compare->add_option("--trace-path", trace_path, "Also write full trajectories of this path");

  auto* convergence = app.add_subcommand("convergence", "Mean-square order of the Taylor expansion");
  add_common(convergence, true, true);
  auto* order_opt = convergence->add_option("--order", order, "Single expansion order (default: 0,1,2)")
                        ->check(CLI::Range(0, qpf::kMaxExpansionOrder));

  auto* validate = app.add_subcommand("validate", "Run the invariant suite");
  add_common(validate, false, false);
  validate->add_option("--inject-fault", fault, "none, remainder-rule or duplicate-generator");

  auto* expand = app.add_subcommand("expand", "Print the terms of one truncated expansion");
  add_common(expand, false, false);
  expand->add_option("--order", order, "Expansion order")->check(CLI::Range(0, qpf::kMaxExpansionOrder));
  expand->add_option("--horizon", horizon, "Expansion horizon")->check(CLI::PositiveNumber);
  expand->add_option("--path", path_index, "Noise path index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compare) return cmd_compare(common, filters, trace_path);
    if (*convergence) {
      return cmd_convergence(common, order_opt->count() > 0 ? std::optional<int>(order) : std::nullopt);
    }
    if (*validate) return cmd_validate(common, fault);
    if (*expand) return cmd_expand(common, order, horizon, path_index);
  } catch (const ScenarioError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return kExitScenario;
  } catch (const qpf::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
