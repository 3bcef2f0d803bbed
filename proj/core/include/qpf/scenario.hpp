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
#include <string_view>
#include <vector>

#include "qpf/manifold_geometry.hpp"
#include "qpf/operator_algebra.hpp"
#include "qpf/projection_filter.hpp"

namespace qpf {

/// A fully validated experiment description.
///
/// The noise lives on a fine grid of 2^log2_steps points over [0, T];
/// integrators advance by `substeps` fine increments at a time.
struct Scenario {
  std::string name;
  SystemModel model;
  Chart chart;
  double horizon;
  int log2_steps;
  int substeps;
  int paths;
  std::uint64_t seed;
  std::vector<Variant> filters;
  // 16 hex digits, FNV-1a over the canonical JSON form.
  std::string digest;

  int fine_steps() const noexcept { return 1 << log2_steps; }
  double fine_step() const noexcept { return horizon / fine_steps(); }
  int steps() const noexcept { return fine_steps() / substeps; }
  double step() const noexcept { return fine_step() * substeps; }
};

inline constexpr double kDefaultHorizon = 5.0;
inline constexpr int kDefaultLog2Steps = 12;
inline constexpr int kDefaultSubsteps = 2;
inline constexpr int kDefaultPaths = 200;
inline constexpr std::uint64_t kDefaultSeed = 20260101;
inline constexpr int kMaxLog2Steps = 24;

/// Parses scenario JSON. Throws ParseError on malformed JSON and
/// InvalidScenario (message prefixed with the offending field) otherwise.
Scenario parse_scenario(std::string_view json_text, std::string name = "scenario");

/// Reads and parses a scenario file; Io when unreadable.
Scenario load_scenario(const std::filesystem::path& path);

/// Directory holding the bundled scenarios (compiled-in source location,
/// overridable with QPF_SCENARIO_DIR).
std::filesystem::path default_scenario_dir();

/// Four-level model with L = diag(1, -1, 1, -1) + offdiag |3><0|, H = 0,
/// rho0 = diag(1/8, 1/8, 3/8, 3/8) and the four diagonal unit projectors as
/// chart. offdiag = 0.3 is the bundled four_level.json; 0 gives the
/// self-adjoint variant.
Scenario four_level_scenario(double offdiag = 0.3);

/// Serializes a scenario to the JSON schema accepted by parse_scenario.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace qpf
