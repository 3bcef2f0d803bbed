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

#include "qpf/random.hpp"

#include <cmath>
#include <numbers>

namespace qpf {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// 53 random bits mapped into (0, 1].
inline double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

Philox4x32::Block Philox4x32::operator()(Block ctr) const noexcept {
  auto key = key_;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

NoiseStream::NoiseStream(std::uint64_t seed, StreamKind kind, std::uint32_t path) noexcept
    : seed_(seed), kind_(kind), path_(path), engine_(seed) {}

double NoiseStream::normal(std::uint64_t step) const noexcept {
  const auto block = engine_({static_cast<std::uint32_t>(step),
                              static_cast<std::uint32_t>(step >> 32), path_,
                              static_cast<std::uint32_t>(kind_)});
  const double u1 = to_unit_open_closed(block[0], block[1]);
  const double u2 = to_unit_open_closed(block[2], block[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> NoiseStream::wiener_increments(std::size_t count, double dt) const {
  std::vector<double> out(count);
  const double scale = std::sqrt(dt);
  for (std::size_t i = 0; i < count; ++i) out[i] = scale * normal(i);
  return out;
}

std::uint64_t NoiseStream::stream_id() const noexcept {
  return (static_cast<std::uint64_t>(kind_) << 32) | path_;
}

}  // namespace qpf
