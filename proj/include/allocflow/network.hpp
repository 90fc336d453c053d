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

#ifndef ALLOCFLOW_NETWORK_HPP_
#define ALLOCFLOW_NETWORK_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"

namespace allocflow {

struct Arc {
  int tail = 0;
  int head = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::int64_t cost = 0;
};

/// Directed network with arc bounds, arc costs and vertex balances.
///
/// Networks produced by build_network / build_pareto_network are layered:
/// vertex 0 is the source s, vertices 1..n1 are treatments, vertices
/// n1+1..n1+n2 are recipients, and the last vertex is the sink t. Arcs are
/// stored in canonical order: all s->treatment arcs ascending by treatment,
/// then all treatment->recipient arcs ascending by (treatment, recipient),
/// then all recipient->t arcs ascending by recipient. The solver relies on
/// this ordering for deterministic traces.
struct Network {
  int vertex_count = 0;
  std::vector<Arc> arcs;
  std::vector<std::int64_t> balance;

  // Layered-layout metadata; set by the builders, zero otherwise.
  bool layered = false;
  int num_treatments = 0;
  int num_recipients = 0;

  int source() const { return 0; }
  int sink() const { return vertex_count - 1; }
  int treatment_vertex(int j) const { return 1 + j; }
  int recipient_vertex(int i) const { return 1 + num_treatments + i; }
};

/// Per-arc flow values, aligned with Network::arcs.
struct Flow {
  std::vector<std::int64_t> values;
};

struct ResidualArc {
  int tail = 0;
  int head = 0;
  std::int64_t capacity = 0;
  std::int64_t cost = 0;
  int arc = 0;          // index into the source Network's arcs
  bool forward = true;  // false: reversal of arc `arc`
};

/// Residual graph of a feasible flow: forward arcs carry remaining
/// capacity u - x at cost c, backward arcs carry x - l at cost -c.
/// Zero-capacity residual arcs are never emitted.
struct ResidualNetwork {
  int vertex_count = 0;
  std::vector<ResidualArc> arcs;
};

namespace detail {

// Ceiling on |arc cost| such that any walk cost (at most vertex_count + 1
// arcs) and any cycle cost scaled by a cycle length stay well inside the
// int64 range used by the cycle-finding routines.
inline std::int64_t max_safe_arc_cost(int vertex_count) {
  return std::numeric_limits<std::int64_t>::max() / 4 /
         static_cast<std::int64_t>(vertex_count + 2);
}

inline std::int64_t scale_outcome(double y, std::int64_t cost_scale,
                                  std::int64_t cost_ceiling) {
  const double scaled = y * static_cast<double>(cost_scale);
  if (!(std::abs(scaled) < static_cast<double>(cost_ceiling))) {
    throw Error(ErrorCode::kCostOverflow,
                "outcome " + std::to_string(y) + " at cost_scale " +
                    std::to_string(cost_scale) +
                    " exceeds the safe integer cost range");
  }
  return std::llround(scaled);
}

}  // namespace detail

/// Builds the layered network whose integer min-cost feasible flows
/// correspond to optimal allocations: s->treatment arcs bounded by the
/// capacities, unit treatment->recipient arcs costing the negated scaled
/// outcome, and recipient->t arcs with lower == upper == 1. The balance is
/// n2 at s, -n2 at t and zero elsewhere, so feasibility checking is exact.
inline Network build_network(const ProblemInstance& instance) {
  require_valid(instance);
  const int n1 = instance.num_treatments();
  const int n2 = instance.num_recipients();

  Network net;
  net.vertex_count = n1 + n2 + 2;
  net.layered = true;
  net.num_treatments = n1;
  net.num_recipients = n2;
  net.balance.assign(net.vertex_count, 0);
  net.balance[net.source()] = n2;
  net.balance[net.sink()] = -n2;

  const std::int64_t cost_ceiling = detail::max_safe_arc_cost(net.vertex_count);
  net.arcs.reserve(static_cast<std::size_t>(n1) + n2 +
                   static_cast<std::size_t>(n1) * n2);
  for (int j = 0; j < n1; ++j) {
    net.arcs.push_back({net.source(), net.treatment_vertex(j), 0,
                        instance.capacities[j], 0});
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n2; ++i) {
      const std::int64_t cost = -detail::scale_outcome(
          instance.outcomes[i][j], instance.cost_scale, cost_ceiling);
      net.arcs.push_back(
          {net.treatment_vertex(j), net.recipient_vertex(i), 0, 1, cost});
    }
  }
  for (int i = 0; i < n2; ++i) {
    net.arcs.push_back({net.recipient_vertex(i), net.sink(), 1, 1, 0});
  }
  return net;
}

/// Same as build_network, but every treatment->recipient arc whose outcome
/// is strictly below the recipient's baseline outcome is absent, so any
/// feasible flow leaves no recipient worse off than under `baseline`.
/// Arcs with outcome equal to the baseline outcome are retained.
inline Network build_pareto_network(const ProblemInstance& instance,
                                    const Allocation& baseline) {
  require_valid(instance);
  try {
    require_feasible(instance, baseline);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInfeasibleBaseline, e.what());
  }
  const int n1 = instance.num_treatments();
  const int n2 = instance.num_recipients();

  Network net;
  net.vertex_count = n1 + n2 + 2;
  net.layered = true;
  net.num_treatments = n1;
  net.num_recipients = n2;
  net.balance.assign(net.vertex_count, 0);
  net.balance[net.source()] = n2;
  net.balance[net.sink()] = -n2;

  const std::int64_t cost_ceiling = detail::max_safe_arc_cost(net.vertex_count);
  for (int j = 0; j < n1; ++j) {
    net.arcs.push_back({net.source(), net.treatment_vertex(j), 0,
                        instance.capacities[j], 0});
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n2; ++i) {
      if (instance.outcomes[i][j] <
          instance.outcomes[i][baseline.assignment[i]]) {
        continue;
      }
      const std::int64_t cost = -detail::scale_outcome(
          instance.outcomes[i][j], instance.cost_scale, cost_ceiling);
      net.arcs.push_back(
          {net.treatment_vertex(j), net.recipient_vertex(i), 0, 1, cost});
    }
  }
  for (int i = 0; i < n2; ++i) {
    net.arcs.push_back({net.recipient_vertex(i), net.sink(), 1, 1, 0});
  }
  return net;
}

inline void require_sized(const Network& net, const Flow& flow) {
  if (flow.values.size() != net.arcs.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "flow has " + std::to_string(flow.values.size()) +
                    " values for " + std::to_string(net.arcs.size()) +
                    " arcs");
  }
}

/// Outflow minus inflow at `vertex`.
inline std::int64_t flow_balance_at(const Network& net, const Flow& flow,
                                    int vertex) {
  require_sized(net, flow);
  if (vertex < 0 || vertex >= net.vertex_count) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "vertex " + std::to_string(vertex) + " out of range");
  }
  std::int64_t balance = 0;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    if (net.arcs[a].tail == vertex) balance += flow.values[a];
    if (net.arcs[a].head == vertex) balance -= flow.values[a];
  }
  return balance;
}

/// A flow is feasible when every arc value lies within its bounds and the
/// realized balance matches the prescribed balance at every vertex.
inline bool is_feasible(const Network& net, const Flow& flow) {
  require_sized(net, flow);
  std::vector<std::int64_t> balance(net.vertex_count, 0);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    const std::int64_t x = flow.values[a];
    if (x < arc.lower || x > arc.upper) return false;
    balance[arc.tail] += x;
    balance[arc.head] -= x;
  }
  for (int v = 0; v < net.vertex_count; ++v) {
    if (balance[v] != net.balance[v]) return false;
  }
  return true;
}

/// Sum of cost * flow over all arcs, in scaled-integer units.
inline std::int64_t flow_cost(const Network& net, const Flow& flow) {
  require_sized(net, flow);
  std::int64_t cost = 0;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    cost += net.arcs[a].cost * flow.values[a];
  }
  return cost;
}

inline ResidualNetwork residual(const Network& net, const Flow& flow) {
  if (!is_feasible(net, flow)) {
    throw Error(ErrorCode::kInfeasibleFlow,
                "residual network requires a feasible flow");
  }
  ResidualNetwork res;
  res.vertex_count = net.vertex_count;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    const std::int64_t x = flow.values[a];
    if (x < arc.upper) {
      res.arcs.push_back({arc.tail, arc.head, arc.upper - x, arc.cost,
                          static_cast<int>(a), true});
    }
    if (x > arc.lower) {
      res.arcs.push_back({arc.head, arc.tail, x - arc.lower, -arc.cost,
                          static_cast<int>(a), false});
    }
  }
  return res;
}

/// Flow induced by an allocation on a layered network: one unit along
/// s -> assignment[i] -> i -> t for every recipient i. Throws
/// kInfeasibleBaseline when the allocation uses an arc the network lacks
/// (possible on Pareto networks given a foreign baseline).
inline Flow flow_from_allocation(const Network& net, const Allocation& alloc) {
  if (!net.layered ||
      static_cast<int>(alloc.assignment.size()) != net.num_recipients) {
    throw Error(ErrorCode::kInvalidArgument,
                "flow_from_allocation requires a layered network and a "
                "matching assignment");
  }
  Flow flow;
  flow.values.assign(net.arcs.size(), 0);
  std::vector<int> arc_of_recipient(net.num_recipients, -1);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const Arc& arc = net.arcs[a];
    if (arc.tail == net.source() || arc.head == net.sink()) continue;
    const int j = arc.tail - 1;
    const int i = arc.head - 1 - net.num_treatments;
    if (alloc.assignment[i] == j) arc_of_recipient[i] = static_cast<int>(a);
  }
  for (int i = 0; i < net.num_recipients; ++i) {
    if (arc_of_recipient[i] < 0) {
      throw Error(ErrorCode::kInfeasibleBaseline,
                  "network has no arc for recipient " + std::to_string(i) +
                      " under treatment " +
                      std::to_string(alloc.assignment[i]));
    }
    flow.values[arc_of_recipient[i]] = 1;
    flow.values[net.arcs.size() - net.num_recipients + i] = 1;  // i -> t
    flow.values[alloc.assignment[i]] += 1;                      // s -> j
  }
  return flow;
}

/// Debug dump in a DIMACS-like min-cost-flow text format: a problem line,
/// one `n` line per vertex balance, one `a` line per arc
/// (tail head lower upper cost). Intended for cross-checks against
/// external solvers.
inline void write_dimacs(const Network& net, std::ostream& out) {
  out << "p min " << net.vertex_count << ' ' << net.arcs.size() << '\n';
  for (int v = 0; v < net.vertex_count; ++v) {
    out << "n " << v << ' ' << net.balance[v] << '\n';
  }
  for (const Arc& arc : net.arcs) {
    out << "a " << arc.tail << ' ' << arc.head << ' ' << arc.lower << ' '
        << arc.upper << ' ' << arc.cost << '\n';
  }
}

}  // namespace allocflow

#endif  // ALLOCFLOW_NETWORK_HPP_
