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


#include "qpf/convergence.hpp"

namespace qpf {

std::vector<ConvergenceStudyResult> run_convergence(const Scenario& scenario,
                                                    const ConvergenceRunOptions& options) {
  if (options.orders.empty()) throw Error(ErrorCode::InvalidArgument, "no expansion orders given");
  ConvergenceOptions study;
  study.fine_divisions = options.fine_divisions;
  study.workers = options.workers;
  const int paths = options.paths.value_or(kDefaultConvergencePaths);
  const std::uint64_t seed = options.seed.value_or(scenario.seed);

  std::vector<ConvergenceStudyResult> out;
  out.reserve(options.orders.size());
  for (int k : options.orders) {
    out.push_back(convergence_study(scenario.model, scenario.chart.base_state(), k,
                                    options.horizons, paths, seed, study));
  }
  return out;
}

}  // namespace qpf
