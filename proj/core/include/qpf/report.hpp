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
#include <filesystem>
#include <string>
#include <vector>

#include "qpf/comparison.hpp"
#include "qpf/scenario.hpp"
#include "qpf/stratonovich_taylor.hpp"

namespace qpf {

/// Provenance of a run. Identical manifests imply byte-identical CSV output.
struct RunManifest {
  std::string command;
  std::string digest;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::uint64_t> stream_ids;
  std::vector<std::string> files;
};

std::string library_version();

/// Writes `value` with 17 significant digits (round-trip exact).
std::string format_real(double value);

/// Columns: time, then mean_<name>, std_<name> per variant in report order.
/// With no variants only the header line is written.
std::string comparison_csv(const ComparisonReport& report);

/// Columns: path, stream_id, record_checksum, status, then avg_<name> per
/// variant.
std::string path_summary_csv(const ComparisonReport& report);

/// Columns: order, delta, mse, bound, paths, seed.
std::string convergence_csv(const std::vector<ConvergenceStudyResult>& results);

/// Static SVG with one mean curve and a +-stddev band per variant.
std::string comparison_svg(const ComparisonReport& report);

/// Columns: time, dY, then theta_<i> (projection filters) or re_<i>_<j>,
/// im_<i>_<j> (full filters). The first line is a '# filter <label>'
/// comment. dY on a row is the increment over the following step; the last
/// row leaves it empty.
std::string trajectory_csv(const FilterTrajectory& trajectory);

std::string manifest_json(const RunManifest& manifest);

/// Writes comparison.csv, paths.csv, comparison.svg, the optional traced
/// trajectories and manifest.json into out_dir (created if missing). Io on
/// failure.
RunManifest emit_report(const ComparisonReport& report, const std::filesystem::path& out_dir,
                        const std::vector<FilterTrajectory>& traces = {});

/// Writes trajectory_<label>.csv per trajectory; returns the file names.
std::vector<std::string> emit_trajectories(const std::vector<FilterTrajectory>& trajectories,
                                           const std::filesystem::path& out_dir);

/// Writes convergence.csv and manifest.json.
RunManifest emit_convergence(const std::vector<ConvergenceStudyResult>& results,
                             const Scenario& scenario, const std::filesystem::path& out_dir);

}  // namespace qpf
