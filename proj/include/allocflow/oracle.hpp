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

#ifndef ALLOCFLOW_ORACLE_HPP_
#define ALLOCFLOW_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"

namespace allocflow {

inline constexpr double kDefaultEnumerationCap = 1e7;

namespace detail {

// Depth-first enumeration of assignment vectors in lexicographic order,
// with capacity counters and a remaining-capacity prune. `accept` filters
// per (recipient, treatment); the first maximizer found wins ties, which
// by lexicographic order is the smallest assignment vector.
template <typename AcceptFn>
std::pair<Allocation, AllocationValue> enumerate_best(
    const ProblemInstance& instance, AcceptFn accept, double enumeration_cap) {
  require_valid(instance);
  const int n1 = instance.num_treatments();
  const int n2 = instance.num_recipients();
  if (n2 > 0 && std::pow(static_cast<double>(n1), n2) > enumeration_cap) {
    throw Error(ErrorCode::kTooLarge,
                "candidate space exceeds the enumeration cap");
  }
  if (!has_feasible_allocation(instance)) {
    throw Error(ErrorCode::kInfeasible,
                "total capacity below the number of recipients");
  }
  if (n2 == 0) return {Allocation{}, AllocationValue{0.0, 0.0}};

  std::vector<std::int64_t> remaining = instance.capacities;
  std::int64_t free_slots = 0;
  for (auto m : remaining) free_slots += m;

  std::vector<int> current(n2, -1);
  std::vector<int> best;
  double best_total = 0.0;
  bool found = false;
  double running = 0.0;

  int depth = 0;
  while (depth >= 0) {
    if (depth == n2) {
      if (!found || running > best_total) {
        best = current;
        best_total = running;
        found = true;
      }
      --depth;
      continue;
    }
    int j = current[depth];
    if (j >= 0) {  // undo previous choice at this depth
      ++remaining[j];
      ++free_slots;
      running -= instance.outcomes[depth][j];
    }
    ++j;
    for (; j < n1; ++j) {
      if (remaining[j] <= 0 || !accept(depth, j)) continue;
      // Prune: capacity left after taking j must cover later recipients.
      if (free_slots - 1 < n2 - depth - 1) continue;
      break;
    }
    if (j == n1) {
      current[depth] = -1;
      --depth;
      continue;
    }
    current[depth] = j;
    --remaining[j];
    --free_slots;
    running += instance.outcomes[depth][j];
    ++depth;
  }

  if (!found) {
    throw Error(ErrorCode::kInfeasible, "no candidate passed the filters");
  }
  Allocation alloc;
  alloc.assignment = std::move(best);
  // Recompute the winning total in one clean pass; the incremental sum
  // used during the search can carry push/pop rounding residue.
  return {alloc, allocation_value(instance, alloc)};
}

}  // namespace detail

/// Exhaustive reference solver: enumerates every assignment vector within
/// the cap, filters by capacity and returns a maximizer of the total
/// outcome (ties: lexicographically smallest vector). Ground truth for
/// cross-validating the flow solver on small instances.
inline std::pair<Allocation, AllocationValue> brute_force_optimal(
    const ProblemInstance& instance,
    double enumeration_cap = kDefaultEnumerationCap) {
  return detail::enumerate_best(
      instance, [](int, int) { return true; }, enumeration_cap);
}

/// As brute_force_optimal, but candidates must leave every recipient at
/// least as well off as under `baseline`.
inline std::pair<Allocation, AllocationValue> brute_force_pareto(
    const ProblemInstance& instance, const Allocation& baseline,
    double enumeration_cap = kDefaultEnumerationCap) {
  try {
    require_feasible(instance, baseline);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInfeasibleBaseline, e.what());
  }
  return detail::enumerate_best(
      instance,
      [&](int i, int j) {
        return instance.outcomes[i][j] >=
               instance.outcomes[i][baseline.assignment[i]];
      },
      enumeration_cap);
}

}  // namespace allocflow

#endif  // ALLOCFLOW_ORACLE_HPP_
