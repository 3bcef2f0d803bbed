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

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpf {

enum class ErrorCode {
  DimensionMismatch,
  NonPositiveTrace,
  NonCommutingGenerators,
  NotSelfAdjoint,
  InvariantViolation,
  EmptyIndex,
  OrderTooLarge,
  UnsupportedOrder,
  TimeOffGrid,
  SingularMetric,
  OverflowGuard,
  ParseError,
  InvalidScenario,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Structured failure carrying the measured defect that tripped the check
/// (e.g. the Frobenius norm of a commutator, or an offending eigenvalue).
/// `defect` is NaN when no scalar measure applies.
class Error : public std::runtime_error {
 public:
  static constexpr double kNoDefect = std::numeric_limits<double>::quiet_NaN();

  Error(ErrorCode code, const std::string& what, double defect = kNoDefect);

  ErrorCode code() const noexcept { return code_; }
  /// what() without the leading error-code name.
  const std::string& message() const noexcept { return message_; }
  double defect() const noexcept { return defect_; }

 private:
  ErrorCode code_;
  std::string message_;
  double defect_;
};

}  // namespace qpf
