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

#include "qpf/error.hpp"

namespace qpf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveTrace: return "NonPositiveTrace";
    case ErrorCode::NonCommutingGenerators: return "NonCommutingGenerators";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::TimeOffGrid: return "TimeOffGrid";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, double defect)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      message_(what),
      defect_(defect) {}

}  // namespace qpf
