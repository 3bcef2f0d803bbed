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

namespace qpf {

/// Numerical thresholds shared by every validation in the library.
struct Tolerances {
  // Self-adjointness of H, relative to max(1, |H|_F).
  double model_hermitian = 1e-12;
  // Self-adjointness of evolving states, relative to max(1, |rho|_F).
  double state_hermitian = 1e-10;
  // |Tr(rho) - 1| for normalized states.
  double unit_trace = 1e-8;
  // Smallest eigenvalue allowed for a (numerically) positive state.
  double eigenvalue_floor = -1e-8;
  // Traces at or below this are treated as a collapsed unnormalized state.
  double trace_floor = 1e-300;
  // Frobenius norm of [A_i, A_j] accepted as commuting.
  double commutator = 1e-10;
  // Self-adjointness of chart generators (absolute).
  double generator_hermitian = 1e-12;
  // Metric is singular when min eig < ratio * max eig.
  double metric_condition = 1e-12;
  // Coordinate box bounding the exponential chart.
  double theta_bound = 50.0;
  // Eigenvalues closer than this are merged into one spectral projector.
  double spectral_grouping = 1e-9;
};

inline constexpr Tolerances kTolerances{};

}  // namespace qpf
