// Copyright 2026 The allocflow Authors
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

#ifndef ALLOCFLOW_ERRORS_HPP_
#define ALLOCFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace allocflow {

enum class ErrorCode {
  // Instance validation.
  kNonRectangular,
  kNonFiniteOutcome,
  kNegativeCapacity,
  kCapacityLengthMismatch,
  // Allocation checks.
  kIndexOutOfRange,
  kCapacityViolated,
  // Feasibility.
  kInfeasible,
  kInfeasibleBaseline,
  kInfeasibleFlow,
  kMalformedFlow,
  // Limits.
  kTooLarge,
  kIterationCapExceeded,
  kCostOverflow,
  // Statistics.
  kNoPairs,
  // Input handling.
  kParse,
  kInvalidArgument,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonRectangular: return "NonRectangular";
    case ErrorCode::kNonFiniteOutcome: return "NonFiniteOutcome";
    case ErrorCode::kNegativeCapacity: return "NegativeCapacity";
    case ErrorCode::kCapacityLengthMismatch: return "CapacityLengthMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kCapacityViolated: return "CapacityViolated";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kInfeasibleBaseline: return "InfeasibleBaseline";
    case ErrorCode::kInfeasibleFlow: return "InfeasibleFlow";
    case ErrorCode::kMalformedFlow: return "MalformedFlow";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kIterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::kCostOverflow: return "CostOverflow";
    case ErrorCode::kNoPairs: return "NoPairs";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Single exception type for the whole library; the code discriminates.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace allocflow

#endif  // ALLOCFLOW_ERRORS_HPP_
