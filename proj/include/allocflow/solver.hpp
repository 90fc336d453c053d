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

#ifndef ALLOCFLOW_SOLVER_HPP_
#define ALLOCFLOW_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "allocflow/cycle_finding.hpp"
#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"
#include "allocflow/network.hpp"

namespace allocflow {

enum class CycleRule {
  kBellmanFord,  // cancel any negative cycle found by Bellman-Ford-Moore
  kMinMean,      // cancel a minimum-mean cycle (strongly polynomial rule)
};

// Where negative cycles are searched for. kResidual materializes the full
// residual network each iteration; kCondensed searches an equivalent
// treatment-level graph that layered networks admit (every residual cycle
// alternates treatment -> recipient/source -> treatment, so cycles survive
// contraction of the two-arc hops). kAuto picks kCondensed for layered
// networks past a size threshold. Both produce cycles of identical cost
// semantics; only tie-breaking among equal cycles may differ.
enum class SearchGraph { kAuto, kResidual, kCondensed };

struct IterationTrace {
  std::int64_t iteration = 0;  // 1-based
  int cycle_length = 0;        // residual arcs on the canceled cycle
  std::int64_t cycle_cost = 0;
  std::int64_t delta = 0;  // units augmented
};

struct SolverConfig {
  CycleRule rule = CycleRule::kMinMean;
  std::optional<std::int64_t> max_iterations;
  std::function<void(const IterationTrace&)> trace;
  SearchGraph search_graph = SearchGraph::kAuto;
};

struct SolveReport {
  Allocation allocation;
  AllocationValue value;
  std::int64_t iterations = 0;
  // Worst-case objective error introduced by rounding outcomes to integer
  // arc costs: n2 * 0.5 / cost_scale.
  double quantization_bound = 0.0;
};

/// Integer feasible flow on a layered network in one pass: each recipient
/// is routed through the lowest-indexed treatment that still has source-arc
/// capacity (and, on Pareto-restricted networks, an existing arc).
inline Flow initial_feasible_flow(const Network& net) {
  if (!net.layered) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial_feasible_flow requires a layered network");
  }
  const int n1 = net.num_treatments;
  const int n2 = net.num_recipients;

  // Treatment -> recipient arc lookup; -1 where the arc is absent.
  std::vector<int> ta_arc(static_cast<std::size_t>(n1) * n2, -1);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    if (arc.tail == net.source() || arc.head == net.sink()) continue;
    const int j = arc.tail - 1;
    const int i = arc.head - 1 - n1;
    ta_arc[static_cast<std::size_t>(j) * n2 + i] = static_cast<int>(a);
  }

  Flow flow;
  flow.values.assign(net.arcs.size(), 0);
  for (int i = 0; i < n2; ++i) {
    int chosen = -1;
    for (int j = 0; j < n1; ++j) {
      if (flow.values[j] >= net.arcs[j].upper) continue;
      if (ta_arc[static_cast<std::size_t>(j) * n2 + i] < 0) continue;
      chosen = j;
      break;
    }
    if (chosen < 0) {
      throw Error(ErrorCode::kInfeasible,
                  "no treatment with remaining capacity for recipient " +
                      std::to_string(i));
    }
    flow.values[chosen] += 1;
    flow.values[ta_arc[static_cast<std::size_t>(chosen) * n2 + i]] = 1;
    flow.values[net.arcs.size() - n2 + i] = 1;
  }
  return flow;
}

/// Reads the allocation off a feasible flow: the unique treatment whose
/// arc into each recipient carries one unit.
inline Allocation extract_allocation(const Network& net, const Flow& flow) {
  if (!net.layered) {
    throw Error(ErrorCode::kInvalidArgument,
                "extract_allocation requires a layered network");
  }
  require_sized(net, flow);
  Allocation alloc;
  alloc.assignment.assign(net.num_recipients, -1);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    if (arc.tail == net.source() || arc.head == net.sink()) continue;
    if (flow.values[a] == 0) continue;
    const int i = arc.head - 1 - net.num_treatments;
    if (flow.values[a] != 1 || alloc.assignment[i] != -1) {
      throw Error(ErrorCode::kMalformedFlow,
                  "recipient " + std::to_string(i) +
                      " carries flow on multiple treatment arcs");
    }
    alloc.assignment[i] = arc.tail - 1;
  }
  for (int i = 0; i < net.num_recipients; ++i) {
    if (alloc.assignment[i] < 0) {
      throw Error(ErrorCode::kMalformedFlow,
                  "recipient " + std::to_string(i) +
                      " has no treatment arc carrying flow");
    }
  }
  return alloc;
}

namespace detail {

struct CancelResult {
  Flow flow;
  std::int64_t iterations = 0;
};

// One augmentation step: +delta on forward residual arcs, -delta on
// backward ones.
inline void augment(const ResidualNetwork& res, const Cycle& cycle,
                    std::int64_t delta, Flow& flow) {
  for (int e : cycle.arcs) {
    const ResidualArc& arc = res.arcs[e];
    flow.values[arc.arc] += arc.forward ? delta : -delta;
  }
}

inline std::int64_t cycle_capacity(const ResidualNetwork& res,
                                   const Cycle& cycle) {
  std::int64_t delta = kInfCost;
  for (int e : cycle.arcs) delta = std::min(delta, res.arcs[e].capacity);
  return delta;
}

// Cycle canceling over the explicit residual network.
inline CancelResult cancel_on_residual(const Network& net, Flow flow,
                                       const SolverConfig& config) {
  CancelResult result;
  for (;;) {
    const ResidualNetwork res = residual(net, flow);
    const auto cycle = config.rule == CycleRule::kBellmanFord
                           ? find_negative_cycle(res)
                           : find_min_mean_cycle(res);
    if (!cycle) break;
    if (config.max_iterations && result.iterations >= *config.max_iterations) {
      throw Error(ErrorCode::kIterationCapExceeded,
                  "not optimal after " + std::to_string(result.iterations) +
                      " canceled cycles");
    }
    const std::int64_t delta = cycle_capacity(res, *cycle);
    augment(res, *cycle, delta, flow);
    ++result.iterations;
    if (config.trace) {
      config.trace({result.iterations, static_cast<int>(cycle->arcs.size()),
                    cycle->cost, delta});
    }
  }
  result.flow = std::move(flow);
  return result;
}

// Cycle canceling via the condensed treatment graph.
//
// In a layered residual network, t is isolated and every cycle strictly
// alternates between treatment vertices and recipient/source vertices, i.e.
// decomposes into two-arc hops
//   j -> i -> sigma(i)   (give recipient i, currently under sigma(i), to j)
//   j -> s -> j'         (return spare capacity of j, take some of j').
// Contracting hops yields a graph on the treatments plus s whose simple
// cycles correspond exactly to simple residual cycles of identical cost
// and twice the arc count; per (j, j') only the cheapest hop can appear on
// a minimum-mean or negative cycle, so one arc per pair suffices. Negative
// and minimum-mean cycle searches on this graph are therefore equivalent
// to searches on the residual network while being orders of magnitude
// smaller for n2 >> n1.
class CondensedCanceler {
 public:
  CondensedCanceler(const Network& net, Flow flow)
      : net_(net),
        flow_(std::move(flow)),
        n1_(net.num_treatments),
        n2_(net.num_recipients) {
    ta_arc_.assign(static_cast<std::size_t>(n1_) * n2_, -1);
    for (std::size_t a = 0; a < net_.arcs.size(); ++a) {
      const Arc& arc = net_.arcs[a];
      if (arc.tail == net_.source() || arc.head == net_.sink()) continue;
      const int j = arc.tail - 1;
      const int i = arc.head - 1 - n1_;
      ta_arc_[static_cast<std::size_t>(j) * n2_ + i] = static_cast<int>(a);
    }
  }

  CancelResult run(const SolverConfig& config) {
    CancelResult result;
    for (;;) {
      build_hops();
      const auto found = config.rule == CycleRule::kBellmanFord
                             ? bfm_negative_cycle(n1_ + 1, hop_arcs_)
                             : karp_min_mean_cycle(n1_ + 1, hop_arcs_);
      if (!found) break;
      if (config.max_iterations &&
          result.iterations >= *config.max_iterations) {
        throw Error(ErrorCode::kIterationCapExceeded,
                    "not optimal after " + std::to_string(result.iterations) +
                        " canceled cycles");
      }
      const auto [cost, delta, length] = apply_hops(*found);
      ++result.iterations;
      if (config.trace) {
        config.trace({result.iterations, length, cost, delta});
      }
    }
    result.flow = std::move(flow_);
    return result;
  }

 private:
  // Hop payload: the recipient realizing the cheapest j -> j' hop, or -1
  // for hops through s.
  void build_hops() {
    const std::size_t cells = static_cast<std::size_t>(n1_) * n1_;
    hop_cost_.assign(cells, kInfCost);
    hop_via_.assign(cells, -1);
    assigned_arc_.assign(n2_, -1);
    for (int j = 0; j < n1_; ++j) {
      for (int i = 0; i < n2_; ++i) {
        const int a = ta_arc_[static_cast<std::size_t>(j) * n2_ + i];
        if (a >= 0 && flow_.values[a] == 1) assigned_arc_[i] = a;
      }
    }
    for (int i = 0; i < n2_; ++i) {
      const int owner_arc = assigned_arc_[i];
      if (owner_arc < 0) {
        throw Error(ErrorCode::kMalformedFlow,
                    "recipient " + std::to_string(i) +
                        " has no treatment arc carrying flow");
      }
      const int owner = net_.arcs[owner_arc].tail - 1;
      const std::int64_t owner_cost = net_.arcs[owner_arc].cost;
      for (int j = 0; j < n1_; ++j) {
        if (j == owner) continue;
        const int a = ta_arc_[static_cast<std::size_t>(j) * n2_ + i];
        if (a < 0) continue;
        const std::int64_t hop = net_.arcs[a].cost - owner_cost;
        std::int64_t& best =
            hop_cost_[static_cast<std::size_t>(j) * n1_ + owner];
        if (hop < best) {
          best = hop;
          hop_via_[static_cast<std::size_t>(j) * n1_ + owner] = i;
        }
      }
    }
    hop_arcs_.clear();
    hop_payload_.clear();
    for (int j = 0; j < n1_; ++j) {
      for (int k = 0; k < n1_; ++k) {
        const std::size_t cell = static_cast<std::size_t>(j) * n1_ + k;
        if (hop_cost_[cell] >= kInfCost) continue;
        hop_arcs_.push_back({j, k, hop_cost_[cell]});
        hop_payload_.push_back(hop_via_[cell]);
      }
    }
    for (int j = 0; j < n1_; ++j) {
      if (flow_.values[j] > 0) {  // backward s arc usable
        hop_arcs_.push_back({j, n1_, 0});
        hop_payload_.push_back(-1);
      }
      if (flow_.values[j] < net_.arcs[j].upper) {  // forward s arc usable
        hop_arcs_.push_back({n1_, j, 0});
        hop_payload_.push_back(-1);
      }
    }
  }

  // Translates a condensed cycle into residual-arc updates and applies it.
  // Returns (cycle cost, delta, residual arc count).
  std::tuple<std::int64_t, std::int64_t, int> apply_hops(
      const std::vector<int>& hops) {
    std::int64_t cost = 0;
    std::int64_t delta = kInfCost;
    // (arc index, +1 forward / -1 backward) pairs
    std::vector<std::pair<int, int>> ops;
    for (int h : hops) {
      const LightArc& hop = hop_arcs_[h];
      cost += hop.cost;
      if (hop.tail == n1_) {  // s -> j': forward source arc
        ops.emplace_back(hop.head, +1);
        delta = std::min(delta,
                         net_.arcs[hop.head].upper - flow_.values[hop.head]);
      } else if (hop.head == n1_) {  // j -> s: backward source arc
        ops.emplace_back(hop.tail, -1);
        delta = std::min(delta, flow_.values[hop.tail]);
      } else {
        const int i = hop_payload_[h];
        const int take = ta_arc_[static_cast<std::size_t>(hop.tail) * n2_ + i];
        const int give = assigned_arc_[i];
        ops.emplace_back(take, +1);
        ops.emplace_back(give, -1);
        delta = std::min<std::int64_t>(delta, 1);
      }
    }
    for (const auto& [arc, sign] : ops) flow_.values[arc] += sign * delta;
    return {cost, delta, 2 * static_cast<int>(hops.size())};
  }

  const Network& net_;
  Flow flow_;
  int n1_;
  int n2_;
  std::vector<int> ta_arc_;
  std::vector<int> assigned_arc_;
  std::vector<std::int64_t> hop_cost_;
  std::vector<int> hop_via_;
  std::vector<LightArc> hop_arcs_;
  std::vector<int> hop_payload_;
};

inline constexpr int kCondensedThreshold = 64;  // vertices

inline bool use_condensed(const Network& net, const SolverConfig& config) {
  switch (config.search_graph) {
    case SearchGraph::kResidual: return false;
    case SearchGraph::kCondensed: return true;
    case SearchGraph::kAuto:
      return net.layered && net.vertex_count > kCondensedThreshold;
  }
  return false;
}

inline CancelResult cancel_cycles_impl(const Network& net, Flow start,
                                       const SolverConfig& config) {
  if (!is_feasible(net, start)) {
    throw Error(ErrorCode::kInfeasibleFlow,
                "cycle canceling requires a feasible starting flow");
  }
  if (use_condensed(net, config)) {
    if (!net.layered) {
      throw Error(ErrorCode::kInvalidArgument,
                  "condensed search requires a layered network");
    }
    return CondensedCanceler(net, std::move(start)).run(config);
  }
  return cancel_on_residual(net, std::move(start), config);
}

}  // namespace detail

/// Cycle-canceling loop: starting from a feasible flow, repeatedly finds a
/// negative cycle in the residual network under the configured rule and
/// augments along it by its minimum residual capacity, until no negative
/// cycle remains. The result is an integer minimum-cost feasible flow.
inline Flow cancel_cycles(const Network& net, Flow start,
                          const SolverConfig& config = {}) {
  return detail::cancel_cycles_impl(net, std::move(start), config).flow;
}

/// Solves the allocation problem exactly: build the network, start from
/// the round-robin feasible flow, cancel cycles, read off the allocation.
inline SolveReport solve(const ProblemInstance& instance,
                         const SolverConfig& config = {}) {
  require_valid(instance);
  if (!has_feasible_allocation(instance)) {
    std::int64_t total_capacity = 0;
    for (auto m : instance.capacities) total_capacity += m;
    throw Error(ErrorCode::kInfeasible,
                "total capacity " + std::to_string(total_capacity) +
                    " is below the number of recipients " +
                    std::to_string(instance.num_recipients()));
  }
  const Network net = build_network(instance);
  auto result =
      detail::cancel_cycles_impl(net, initial_feasible_flow(net), config);
  SolveReport report;
  report.allocation = extract_allocation(net, result.flow);
  report.value = allocation_value(instance, report.allocation);
  report.iterations = result.iterations;
  report.quantization_bound = instance.num_recipients() * 0.5 /
                              static_cast<double>(instance.cost_scale);
  return report;
}

/// Solves the Pareto-guaranteed variant: arcs strictly below the baseline
/// outcome are absent from the network, so no recipient ends worse off;
/// the baseline-induced flow (always feasible there) seeds the canceling.
inline SolveReport solve_pareto(const ProblemInstance& instance,
                                const Allocation& baseline,
                                const SolverConfig& config = {}) {
  require_valid(instance);
  try {
    require_feasible(instance, baseline);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInfeasibleBaseline, e.what());
  }
  const Network net = build_pareto_network(instance, baseline);
  auto result = detail::cancel_cycles_impl(
      net, flow_from_allocation(net, baseline), config);
  SolveReport report;
  report.allocation = extract_allocation(net, result.flow);
  report.value = allocation_value(instance, report.allocation);
  report.iterations = result.iterations;
  report.quantization_bound = instance.num_recipients() * 0.5 /
                              static_cast<double>(instance.cost_scale);
  return report;
}

}  // namespace allocflow

#endif  // ALLOCFLOW_SOLVER_HPP_
