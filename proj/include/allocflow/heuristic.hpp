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

#ifndef ALLOCFLOW_HEURISTIC_HPP_
#define ALLOCFLOW_HEURISTIC_HPP_

#include <cstdint>
#include <numeric>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"

namespace allocflow {

/// One-pass greedy baseline: recipients are processed in `order` (indices
/// 0..n2-1 when empty) and each receives the treatment with the highest
/// outcome among those still under capacity, ties to the lowest index.
/// Order-sensitive by nature; the exact processing order is therefore an
/// explicit parameter.
inline Allocation greedy_allocate(const ProblemInstance& instance,
                                  std::vector<int> order = {}) {
  require_valid(instance);
  const int n1 = instance.num_treatments();
  const int n2 = instance.num_recipients();
  if (order.empty()) {
    order.resize(n2);
    std::iota(order.begin(), order.end(), 0);
  }
  if (static_cast<int>(order.size()) != n2) {
    throw Error(ErrorCode::kInvalidArgument,
                "order must list every recipient exactly once");
  }
  std::vector<char> seen(n2, 0);
  for (int i : order) {
    if (i < 0 || i >= n2 || seen[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "order must be a permutation of the recipients");
    }
    seen[i] = 1;
  }

  std::vector<std::int64_t> remaining = instance.capacities;
  Allocation alloc;
  alloc.assignment.assign(n2, -1);
  for (int i : order) {
    int best = -1;
    for (int j = 0; j < n1; ++j) {
      if (remaining[j] <= 0) continue;
      if (best < 0 || instance.outcomes[i][j] > instance.outcomes[i][best]) {
        best = j;
      }
    }
    if (best < 0) {
      throw Error(ErrorCode::kInfeasible,
                  "no treatment with remaining capacity for recipient " +
                      std::to_string(i));
    }
    alloc.assignment[i] = best;
    --remaining[best];
  }
  return alloc;
}

}  // namespace allocflow

#endif  // ALLOCFLOW_HEURISTIC_HPP_
