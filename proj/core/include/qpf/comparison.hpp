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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpf/projection_filter.hpp"
#include "qpf/scenario.hpp"

namespace qpf {

struct ComparisonOptions {
  // Overrides Scenario::paths / seed / filters when set.
  std::optional<int> paths;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Variant>> filters;
  int workers = 0;
  // Keep per-path distance series (memory grows with paths x steps).
  bool keep_series = false;
};

struct PathOutcome {
  std::uint32_t path = 0;
  std::uint64_t stream_id = 0;
  // Checksum of the observation record; every variant is verified to have
  // consumed exactly this record.
  std::uint64_t record_checksum = 0;
  bool accepted = false;
  std::string failure;
  // Per variant, in ComparisonReport::variants order.
  std::vector<double> time_average;
  std::vector<std::vector<double>> distance;
  double min_eigenvalue = 0.0;
  double max_trace_defect = 0.0;
};

/// Hilbert-Schmidt distance between the quantum filter and each projection
/// filter, per path and aggregated over the accepted paths.
struct ComparisonReport {
  std::string scenario;
  std::string digest;
  std::uint64_t seed = 0;
  std::vector<Variant> variants;
  std::vector<double> times;
  // [variant][grid point]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
  // Ensemble mean of the per-path time averages, per variant.
  std::vector<double> time_average;
  // Fraction of accepted paths with time-averaged distance new <= old;
  // empty unless both variants ran.
  std::optional<double> win_rate;
  std::vector<PathOutcome> paths;
  int accepted = 0;
  int failed = 0;
  double min_eigenvalue = 0.0;
  double max_trace_defect = 0.0;

  // More than 1% of paths failed.
  bool run_failed() const noexcept { return failed * 100 > static_cast<int>(paths.size()); }
  // Index of v in variants, or -1.
  int variant_index(Variant v) const noexcept;
};

/// Runs the comparison experiment: for each path, the quantum filter is
/// integrated from the scenario noise, producing the observation record that
/// drives every projection filter variant. Paths that raise (singular metric,
/// chart overflow, invariant violation) are excluded and counted.
ComparisonReport run_comparison(const Scenario& scenario, const ComparisonOptions& options = {});

/// Full trajectories of one comparison path: the quantum filter first
/// (label "quantum", states filled), then one projection filter per variant.
/// Uses the same noise as run_comparison for (seed, path).
std::vector<FilterTrajectory> trace_path(const Scenario& scenario, std::uint64_t seed,
                                         std::uint32_t path, const std::vector<Variant>& variants);

}  // namespace qpf
