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
#include <vector>

#include "qpf/scenario.hpp"
#include "qpf/stratonovich_taylor.hpp"

namespace qpf {

struct ConvergenceRunOptions {
  std::vector<int> orders{0, 1, 2};
  // Delta = 2^-5 ... 2^-9.
  std::vector<double> horizons{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  std::optional<int> paths;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  int fine_divisions = 16;
};

inline constexpr int kDefaultConvergencePaths = 2000;

/// Mean-square error of the truncated expansion of the linear filter, one
/// study per order. Paths default to kDefaultConvergencePaths, the seed to
/// the scenario seed.
std::vector<ConvergenceStudyResult> run_convergence(const Scenario& scenario,
                                                    const ConvergenceRunOptions& options = {});

}  // namespace qpf
