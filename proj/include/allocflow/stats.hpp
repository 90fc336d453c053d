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

#ifndef ALLOCFLOW_STATS_HPP_
#define ALLOCFLOW_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/heuristic.hpp"
#include "allocflow/model.hpp"
#include "allocflow/solver.hpp"

namespace allocflow {

/// Observations grouped by an exchangeability stratum; within each group,
/// observations belong to named arms (e.g. providers, sites, variants).
/// Permuting observations within a group is assumed to preserve the null
/// distribution.
struct GroupedOutcomes {
  struct Arm {
    std::string label;
    std::vector<double> values;
  };
  struct Group {
    std::string label;
    std::vector<Arm> arms;
  };
  std::vector<Group> groups;
};

/// How arm pairs enter the statistic. Pair weighting averages |mean
/// difference| over all pairs pooled across groups; group weighting first
/// averages within each group, then across groups with at least one pair.
enum class PairWeighting { kPooledPairs, kPerGroup };

struct PermutationReport {
  double observed = 0.0;
  double excess = 0.0;   // observed minus the mean replicate statistic
  double p_value = 1.0;  // share of replicates >= observed
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_valid_grouped(const GroupedOutcomes& data) {
  for (const auto& group : data.groups) {
    if (group.arms.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group '" + group.label + "' has no arms");
    }
    for (const auto& arm : group.arms) {
      if (arm.values.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "arm '" + arm.label + "' in group '" + group.label +
                        "' has no observations");
      }
    }
  }
}

// Statistic over per-group arm means laid out as means[group][arm].
inline double abs_difference_statistic(
    const std::vector<std::vector<double>>& means, PairWeighting weighting) {
  double pooled_sum = 0.0;
  std::int64_t pooled_pairs = 0;
  double group_sum = 0.0;
  std::int64_t groups_with_pairs = 0;
  for (const auto& group_means : means) {
    const std::size_t arms = group_means.size();
    if (arms < 2) continue;
    double sum = 0.0;
    for (std::size_t a = 0; a + 1 < arms; ++a) {
      for (std::size_t b = a + 1; b < arms; ++b) {
        sum += std::abs(group_means[a] - group_means[b]);
      }
    }
    const std::int64_t pairs =
        static_cast<std::int64_t>(arms) * (arms - 1) / 2;
    pooled_sum += sum;
    pooled_pairs += pairs;
    group_sum += sum / pairs;
    ++groups_with_pairs;
  }
  if (pooled_pairs == 0) {
    throw Error(ErrorCode::kNoPairs, "every group has a single arm");
  }
  return weighting == PairWeighting::kPooledPairs
             ? pooled_sum / pooled_pairs
             : group_sum / groups_with_pairs;
}

inline std::vector<std::vector<double>> arm_means(
    const GroupedOutcomes& data) {
  std::vector<std::vector<double>> means(data.groups.size());
  for (std::size_t g = 0; g < data.groups.size(); ++g) {
    for (const auto& arm : data.groups[g].arms) {
      double sum = 0.0;
      for (double v : arm.values) sum += v;
      means[g].push_back(sum / arm.values.size());
    }
  }
  return means;
}

// The replicate stream is pinned: replicate r draws from a mt19937_64
// seeded with seed_seq{low32(seed), high32(seed), r}, and shuffling is an
// explicit Fisher-Yates over engine() % (k+1). Both pieces are fully
// specified by the standard, so identical seeds give identical replicate
// sequences everywhere, independent of how replicates are distributed
// over worker threads.
inline std::mt19937_64 replicate_engine(std::uint64_t seed,
                                        std::int64_t replicate) {
  std::seed_seq sequence{static_cast<std::uint32_t>(seed),
                         static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(replicate),
                         static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(sequence);
}

template <typename T>
void fisher_yates(std::vector<T>& values, std::mt19937_64& engine) {
  for (std::size_t k = values.size(); k > 1; --k) {
    const std::size_t idx = engine() % k;
    std::swap(values[k - 1], values[idx]);
  }
}

}  // namespace detail

/// Average absolute difference between arm means: within each group, all
/// unordered arm pairs contribute |mean_a - mean_b|; groups with a single
/// arm contribute nothing. Throws kNoPairs when no group has two arms.
inline double avg_abs_difference(
    const GroupedOutcomes& data,
    PairWeighting weighting = PairWeighting::kPooledPairs) {
  detail::require_valid_grouped(data);
  return detail::abs_difference_statistic(detail::arm_means(data), weighting);
}

/// Permutation test of the average-absolute-difference statistic. Each
/// replicate shuffles outcomes within every group independently and deals
/// them back to arms with the original arm sizes kept fixed; the p-value
/// is the share of replicates whose statistic is >= the observed one
/// (ties count as extreme), and the excess is the observed statistic minus
/// the replicate mean. Deterministic given (data, replicates, seed);
/// replicates may be evaluated on several threads without changing the
/// result.
inline PermutationReport permutation_test(
    const GroupedOutcomes& data, std::int64_t replicates, std::uint64_t seed,
    PairWeighting weighting = PairWeighting::kPooledPairs,
    int thread_count = 1) {
  detail::require_valid_grouped(data);
  if (replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "replicates must be >= 1");
  }
  const double observed =
      detail::abs_difference_statistic(detail::arm_means(data), weighting);

  // Pooled values and arm sizes per group, fixed across replicates.
  std::vector<std::vector<double>> pools(data.groups.size());
  std::vector<std::vector<std::size_t>> arm_sizes(data.groups.size());
  for (std::size_t g = 0; g < data.groups.size(); ++g) {
    for (const auto& arm : data.groups[g].arms) {
      pools[g].insert(pools[g].end(), arm.values.begin(), arm.values.end());
      arm_sizes[g].push_back(arm.values.size());
    }
  }

  std::vector<double> statistics(replicates);
  const auto run_range = [&](std::int64_t begin, std::int64_t end) {
    std::vector<std::vector<double>> means(data.groups.size());
    std::vector<double> shuffled;
    for (std::int64_t r = begin; r < end; ++r) {
      auto engine = detail::replicate_engine(seed, r);
      for (std::size_t g = 0; g < pools.size(); ++g) {
        shuffled = pools[g];
        detail::fisher_yates(shuffled, engine);
        means[g].clear();
        std::size_t offset = 0;
        for (std::size_t size : arm_sizes[g]) {
          double sum = 0.0;
          for (std::size_t k = 0; k < size; ++k) sum += shuffled[offset + k];
          means[g].push_back(sum / size);
          offset += size;
        }
      }
      statistics[r] = detail::abs_difference_statistic(means, weighting);
    }
  };

  if (thread_count <= 1 || replicates < 2 * thread_count) {
    run_range(0, replicates);
  } else {
    std::vector<std::thread> workers;
    const std::int64_t chunk = (replicates + thread_count - 1) / thread_count;
    for (int t = 0; t < thread_count; ++t) {
      const std::int64_t begin = t * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk, replicates);
      if (begin >= end) break;
      workers.emplace_back(run_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }

  std::int64_t at_least = 0;
  double replicate_sum = 0.0;
  for (double s : statistics) {
    if (s >= observed) ++at_least;
    replicate_sum += s;
  }
  PermutationReport report;
  report.observed = observed;
  report.excess = observed - replicate_sum / replicates;
  report.p_value = static_cast<double>(at_least) / replicates;
  report.replicates = replicates;
  report.seed = seed;
  return report;
}

/// Holm-Sidak step-down adjustment of a p-value vector; entry order is
/// preserved. Standard multiple-testing post-processing for reports that
/// test several outcomes at once.
inline std::vector<double> holm_sidak_adjust(std::vector<double> p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });
  std::vector<double> adjusted(m, 0.0);
  double running_max = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double p = p_values[order[rank]];
    const double step =
        1.0 - std::pow(1.0 - p, static_cast<double>(m - rank));
    running_max = std::max(running_max, std::min(1.0, step));
    adjusted[order[rank]] = running_max;
  }
  return adjusted;
}

/// Mean outcomes under the four mechanisms of interest: the actual
/// allocation, the greedy baseline, the unconstrained optimum, and the
/// Pareto-guaranteed optimum seeded by the actual allocation. By
/// construction actual <= pareto <= optimal and greedy <= optimal (up to
/// the solver's quantization bound, zero whenever outcomes scale exactly).
struct MechanismComparison {
  AllocationValue actual;
  AllocationValue greedy;
  AllocationValue optimal;
  AllocationValue pareto;
  Allocation greedy_allocation;
  Allocation optimal_allocation;
  Allocation pareto_allocation;
  std::int64_t optimal_iterations = 0;
  std::int64_t pareto_iterations = 0;
};

inline MechanismComparison compare_mechanisms(
    const ProblemInstance& instance, const Allocation& actual,
    std::vector<int> order = {}, const SolverConfig& config = {}) {
  MechanismComparison result;
  result.actual = allocation_value(instance, actual);
  result.greedy_allocation = greedy_allocate(instance, std::move(order));
  result.greedy = allocation_value(instance, result.greedy_allocation);
  SolveReport optimal = solve(instance, config);
  SolveReport pareto = solve_pareto(instance, actual, config);
  result.optimal = optimal.value;
  result.pareto = pareto.value;
  result.optimal_allocation = std::move(optimal.allocation);
  result.pareto_allocation = std::move(pareto.allocation);
  result.optimal_iterations = optimal.iterations;
  result.pareto_iterations = pareto.iterations;
  return result;
}

/// Line-oriented key:value rendering of a permutation report.
inline std::string permutation_report_text(const PermutationReport& report) {
  auto fmt = [](double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return std::string(buffer);
  };
  std::string text;
  text += "observed: " + fmt(report.observed) + "\n";
  text += "excess: " + fmt(report.excess) + "\n";
  text += "p_value: " + fmt(report.p_value) + "\n";
  text += "replicates: " + std::to_string(report.replicates) + "\n";
  text += "seed: " + std::to_string(report.seed) + "\n";
  return text;
}

}  // namespace allocflow

#endif  // ALLOCFLOW_STATS_HPP_
