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

#ifndef ALLOCFLOW_MODEL_HPP_
#define ALLOCFLOW_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "allocflow/errors.hpp"

namespace allocflow {

inline constexpr std::int64_t kDefaultCostScale = 1'000'000;

/// One allocation problem: a dense outcome matrix (rows = recipients,
/// columns = treatments) plus per-treatment capacities. `cost_scale`
/// controls how real-valued outcomes are rounded to integer arc costs
/// when the instance is turned into a network; the induced worst-case
/// objective error is reported by the solver, never hidden.
struct ProblemInstance {
  std::vector<std::vector<double>> outcomes;
  std::vector<std::int64_t> capacities;
  std::int64_t cost_scale = kDefaultCostScale;

  int num_recipients() const { return static_cast<int>(outcomes.size()); }
  int num_treatments() const {
    return outcomes.empty() ? static_cast<int>(capacities.size())
                            : static_cast<int>(outcomes.front().size());
  }
};

/// Total assignment: entry i is the treatment index given to recipient i.
struct Allocation {
  std::vector<int> assignment;
};

struct AllocationValue {
  double total = 0.0;
  double mean = 0.0;
};

/// Checks all ProblemInstance invariants; returns the first violation
/// or std::nullopt when the instance is well formed.
inline std::optional<Error> validate(const ProblemInstance& instance) {
  const int n1 = instance.num_treatments();
  for (std::size_t i = 0; i < instance.outcomes.size(); ++i) {
    const auto& row = instance.outcomes[i];
    if (static_cast<int>(row.size()) != n1) {
      return Error(ErrorCode::kNonRectangular,
                   "row " + std::to_string(i) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(n1));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!std::isfinite(row[j])) {
        return Error(ErrorCode::kNonFiniteOutcome,
                     "outcome (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") is not finite");
      }
    }
  }
  if (static_cast<int>(instance.capacities.size()) != n1) {
    return Error(ErrorCode::kCapacityLengthMismatch,
                 "capacities has length " +
                     std::to_string(instance.capacities.size()) +
                     ", expected " + std::to_string(n1));
  }
  for (std::size_t j = 0; j < instance.capacities.size(); ++j) {
    if (instance.capacities[j] < 0) {
      return Error(ErrorCode::kNegativeCapacity,
                   "capacity of treatment " + std::to_string(j) +
                       " is negative");
    }
  }
  if (instance.cost_scale < 1) {
    return Error(ErrorCode::kInvalidArgument, "cost_scale must be >= 1");
  }
  return std::nullopt;
}

inline void require_valid(const ProblemInstance& instance) {
  if (auto err = validate(instance)) throw *err;
}

/// An allocation exists iff total capacity covers all recipients.
inline bool has_feasible_allocation(const ProblemInstance& instance) {
  std::int64_t total_capacity = 0;
  for (std::int64_t m : instance.capacities) total_capacity += m;
  return total_capacity >= instance.num_recipients();
}

/// Throws unless `alloc` is a total assignment for `instance` that
/// respects every per-treatment capacity.
inline void require_feasible(const ProblemInstance& instance,
                             const Allocation& alloc) {
  const int n1 = instance.num_treatments();
  const int n2 = instance.num_recipients();
  if (static_cast<int>(alloc.assignment.size()) != n2) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "assignment has length " +
                    std::to_string(alloc.assignment.size()) + ", expected " +
                    std::to_string(n2));
  }
  std::vector<std::int64_t> used(n1, 0);
  for (int i = 0; i < n2; ++i) {
    const int j = alloc.assignment[i];
    if (j < 0 || j >= n1) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "recipient " + std::to_string(i) +
                      " assigned invalid treatment " + std::to_string(j));
    }
    if (++used[j] > instance.capacities[j]) {
      throw Error(ErrorCode::kCapacityViolated,
                  "treatment " + std::to_string(j) + " exceeds capacity " +
                      std::to_string(instance.capacities[j]));
    }
  }
}

/// Total and mean realized outcome of an allocation.
inline AllocationValue allocation_value(const ProblemInstance& instance,
                                        const Allocation& alloc) {
  require_feasible(instance, alloc);
  const int n2 = instance.num_recipients();
  double total = 0.0;
  for (int i = 0; i < n2; ++i) {
    total += instance.outcomes[i][alloc.assignment[i]];
  }
  return {total, n2 == 0 ? 0.0 : total / n2};
}

}  // namespace allocflow

#endif  // ALLOCFLOW_MODEL_HPP_
