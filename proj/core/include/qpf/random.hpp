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

#include <array>
#include <cstdint>
#include <vector>

namespace qpf {

/// Counter-based Philox4x32-10 generator. Every draw is a pure function of
/// (key, counter), so a path's noise can be regenerated in any order and on
/// any worker.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t key) noexcept;

  Block operator()(Block counter) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

/// Purpose tag folded into the counter so different experiments that share
/// a seed never reuse a stream.
enum class StreamKind : std::uint32_t {
  Comparison = 1,
  Convergence = 2,
  FormEquivalence = 3,
  Validation = 4,
  Expansion = 5,
};

/// Standard normal draws keyed by (seed, kind, path, step).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, StreamKind kind, std::uint32_t path) noexcept;

  double normal(std::uint64_t step) const noexcept;
  /// sqrt(dt) * N(0,1) for steps [0, count).
  std::vector<double> wiener_increments(std::size_t count, double dt) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t path() const noexcept { return path_; }
  /// Stable identifier recorded in run manifests.
  std::uint64_t stream_id() const noexcept;

 private:
  std::uint64_t seed_;
  StreamKind kind_;
  std::uint32_t path_;
  Philox4x32 engine_;
};

}  // namespace qpf
