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

#include "qpf/comparison.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fnv.hpp"
#include "qpf/parallel.hpp"
#include "qpf/quantum_filter.hpp"
#include "qpf/random.hpp"

namespace qpf {
namespace {

SmeTrajectory quantum_filter_path(const Scenario& scenario, const NoiseStream& noise) {
  const auto fine =
      noise.wiener_increments(static_cast<std::size_t>(scenario.fine_steps()), scenario.fine_step());
  const auto dw = coarsen_increments(fine, scenario.substeps);
  return integrate_sme(scenario.model, DensityState(scenario.chart.base_state()), dw,
                       scenario.step());
}

PathOutcome run_path(const Scenario& scenario, const std::vector<Variant>& variants,
                     std::uint64_t seed, std::uint32_t path) {
  PathOutcome out;
  out.path = path;
  const NoiseStream noise(seed, StreamKind::Comparison, path);
  out.stream_id = noise.stream_id();
  try {
    const double dt = scenario.step();
    const SmeTrajectory truth = quantum_filter_path(scenario, noise);
    out.min_eigenvalue = truth.min_eigenvalue;
    out.max_trace_defect = truth.max_trace_defect;
    out.record_checksum = detail::fnv1a(truth.observations);

    for (Variant v : variants) {
      const FilterTrajectory traj =
          integrate_projection_filter(scenario.chart, scenario.model, v, truth.observations, dt);
      if (detail::fnv1a(traj.observations) != out.record_checksum) {
        throw Error(ErrorCode::InvariantViolation,
                    fmt::format("filter '{}' consumed a different observation record",
                                short_name(v)));
      }
      std::vector<double> dist(traj.theta.size());
      double sum = 0.0;
      for (std::size_t j = 0; j < traj.theta.size(); ++j) {
        dist[j] = hs_distance(truth.states[j], normalized_chart_state(scenario.chart, traj.theta[j]));
        sum += dist[j];
      }
      out.time_average.push_back(sum / static_cast<double>(dist.size()));
      out.distance.push_back(std::move(dist));
    }
    out.accepted = true;
  } catch (const Error& e) {
    out.accepted = false;
    out.failure = e.what();
    out.time_average.clear();
    out.distance.clear();
  }
  return out;
}

}  // namespace

int ComparisonReport::variant_index(Variant v) const noexcept {
  auto it = std::find(variants.begin(), variants.end(), v);
  return it == variants.end() ? -1 : static_cast<int>(it - variants.begin());
}

ComparisonReport run_comparison(const Scenario& scenario, const ComparisonOptions& options) {
  ComparisonReport report;
  report.scenario = scenario.name;
  report.digest = scenario.digest;
  report.seed = options.seed.value_or(scenario.seed);
  report.variants = options.filters.value_or(scenario.filters);
  const int paths = options.paths.value_or(scenario.paths);
  if (paths < 1) throw Error(ErrorCode::InvalidArgument, "paths must be at least 1");

  const auto steps = static_cast<std::size_t>(scenario.steps());
  report.times.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) report.times[j] = static_cast<double>(j) * scenario.step();

  report.paths.resize(static_cast<std::size_t>(paths));
  parallel_for(report.paths.size(), options.workers, [&](std::size_t p) {
    report.paths[p] = run_path(scenario, report.variants, report.seed,
                               static_cast<std::uint32_t>(p));
  });

  // Ordered reduction over path index: independent of worker count.
  const std::size_t nv = report.variants.size();
  report.mean.assign(nv, std::vector<double>(steps + 1, 0.0));
  report.stddev.assign(nv, std::vector<double>(steps + 1, 0.0));
  report.time_average.assign(nv, 0.0);
  report.min_eigenvalue = 0.0;
  bool first = true;
  for (const auto& p : report.paths) {
    if (!p.accepted) {
      ++report.failed;
      continue;
    }
    ++report.accepted;
    report.min_eigenvalue = first ? p.min_eigenvalue : std::min(report.min_eigenvalue, p.min_eigenvalue);
    report.max_trace_defect = std::max(report.max_trace_defect, p.max_trace_defect);
    first = false;
    for (std::size_t v = 0; v < nv; ++v) {
      report.time_average[v] += p.time_average[v];
      for (std::size_t j = 0; j <= steps; ++j) report.mean[v][j] += p.distance[v][j];
    }
  }
  if (report.accepted > 0) {
    const double n = report.accepted;
    for (std::size_t v = 0; v < nv; ++v) {
      report.time_average[v] /= n;
      for (double& m : report.mean[v]) m /= n;
    }
    for (const auto& p : report.paths) {
      if (!p.accepted) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t j = 0; j <= steps; ++j) {
          const double d = p.distance[v][j] - report.mean[v][j];
          report.stddev[v][j] += d * d;
        }
      }
    }
    const double denom = report.accepted > 1 ? n - 1.0 : 1.0;
    for (auto& series : report.stddev) {
      for (double& s : series) s = std::sqrt(s / denom);
    }
  }

  const int inew = report.variant_index(Variant::NewStratonovich);
  const int iold = report.variant_index(Variant::Baseline);
  if (inew >= 0 && iold >= 0 && report.accepted > 0) {
    int wins = 0;
    for (const auto& p : report.paths) {
      if (p.accepted && p.time_average[static_cast<std::size_t>(inew)] <=
                            p.time_average[static_cast<std::size_t>(iold)]) {
        ++wins;
      }
    }
    report.win_rate = static_cast<double>(wins) / report.accepted;
  }

  if (!options.keep_series) {
    for (auto& p : report.paths) {
      p.distance.clear();
      p.distance.shrink_to_fit();
    }
  }
  return report;
}

std::vector<FilterTrajectory> trace_path(const Scenario& scenario, std::uint64_t seed,
                                         std::uint32_t path, const std::vector<Variant>& variants) {
  const NoiseStream noise(seed, StreamKind::Comparison, path);
  SmeTrajectory truth = quantum_filter_path(scenario, noise);
  std::vector<FilterTrajectory> out;
  FilterTrajectory q;
  q.label = "quantum";
  q.dt = truth.dt;
  q.observations = truth.observations;
  q.states = std::move(truth.states);
  for (std::size_t j = 0; j < q.states.size(); ++j) q.times.push_back(static_cast<double>(j) * q.dt);
  out.push_back(std::move(q));
  for (Variant v : variants) {
    out.push_back(integrate_projection_filter(scenario.chart, scenario.model, v,
                                              out.front().observations, scenario.step()));
  }
  return out;
}

}  // namespace qpf
