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

#include "qpf/scenario.hpp"

namespace qpf {

/// Deliberate defects used to confirm that the suite detects them.
enum class Fault {
  None,
  // Recursion drops the (0, alpha) branch.
  RemainderRule,
  // Chart with a repeated generator.
  DuplicateGenerator,
};

std::optional<Fault> parse_fault(std::string_view name) noexcept;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const noexcept;
  std::vector<std::string> failures() const;
};

struct ValidateOptions {
  Fault fault = Fault::None;
  std::uint64_t seed = 7;
  // Random chart points per property check.
  int samples = 100;
};

/// Runs the invariant suite against `scenario` (its chart and model) and the
/// self-adjoint ablation of the four-level model. Never throws for a failed
/// check; each check reports its own outcome.
ValidationReport run_validate(const Scenario& scenario, const ValidateOptions& options = {});

/// Fixed-width pass/fail table.
std::string format_validation(const ValidationReport& report);

}  // namespace qpf
