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

#ifndef ALLOCFLOW_CYCLE_FINDING_HPP_
#define ALLOCFLOW_CYCLE_FINDING_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "allocflow/errors.hpp"
#include "allocflow/network.hpp"

namespace allocflow {

/// A directed cycle given as indices into the arc list it was found in,
/// in traversal order, together with its total cost.
struct Cycle {
  std::vector<int> arcs;
  std::int64_t cost = 0;
};

namespace detail {

struct LightArc {
  int tail = 0;
  int head = 0;
  std::int64_t cost = 0;
};

inline constexpr std::int64_t kInfCost =
    std::numeric_limits<std::int64_t>::max() / 2;

// Walks predecessor arcs from `start`. If the walk closes on itself within
// `max_steps`, returns the arc indices of the closed cycle in traversal
// order; otherwise nullopt (chain ended at an unrelaxed vertex).
inline std::optional<std::vector<int>> walk_predecessor_cycle(
    int start, const std::vector<int>& pred_arc,
    const std::vector<LightArc>& arcs, int max_steps) {
  std::vector<int> seen_at(pred_arc.size(), -1);
  std::vector<int> path;  // arc indices walked, in reverse traversal order
  int v = start;
  for (int step = 0; step <= max_steps; ++step) {
    if (seen_at[v] >= 0) {
      // Arcs from the first visit of v up to now form the cycle.
      std::vector<int> cycle(path.begin() + seen_at[v], path.end());
      std::reverse(cycle.begin(), cycle.end());
      return cycle;
    }
    seen_at[v] = static_cast<int>(path.size());
    const int e = pred_arc[v];
    if (e < 0) return std::nullopt;
    path.push_back(e);
    v = arcs[e].tail;
  }
  return std::nullopt;
}

// Bellman-Ford-Moore negative-cycle detection from a virtual source
// connected to every vertex at cost zero, with predecessor-walk cycle
// extraction. Returns the arcs of a directed cycle with total cost < 0,
// or nullopt when no such cycle exists.
inline std::optional<std::vector<int>> bfm_negative_cycle(
    int vertex_count, const std::vector<LightArc>& arcs) {
  if (vertex_count == 0 || arcs.empty()) return std::nullopt;
  std::vector<std::int64_t> dist(vertex_count, 0);
  std::vector<int> pred_arc(vertex_count, -1);
  std::vector<int> relaxed;

  // A pass with no relaxation certifies the absence of negative cycles.
  // A relaxation in pass vertex_count or later implies one exists; the
  // predecessor graph then contains it. Extracted candidates are verified
  // (cost < 0) before being returned, and passes continue otherwise.
  const int max_passes = 3 * vertex_count + 3;
  for (int pass = 1; pass <= max_passes; ++pass) {
    relaxed.clear();
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      const LightArc& arc = arcs[e];
      if (dist[arc.tail] + arc.cost < dist[arc.head]) {
        dist[arc.head] = dist[arc.tail] + arc.cost;
        pred_arc[arc.head] = static_cast<int>(e);
        relaxed.push_back(arc.head);
      }
    }
    if (relaxed.empty()) return std::nullopt;
    if (pass < vertex_count) continue;
    for (int v : relaxed) {
      auto cycle = walk_predecessor_cycle(v, pred_arc, arcs, vertex_count + 1);
      if (!cycle) continue;
      std::int64_t cost = 0;
      for (int e : *cycle) cost += arcs[e].cost;
      if (cost < 0) return cycle;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "negative-cycle extraction did not converge");
}

// Karp's minimum-mean-cycle recurrence with exact fraction comparisons.
//
// d[k][v] is the minimum cost of any walk with exactly k arcs ending at v,
// walks may start anywhere (d[0][v] = 0). The minimum cycle mean is
//   mu* = min_v max_k (d[n][v] - d[k][v]) / (n - k).
// Cycle recovery goes through the reduced costs r(e) = c(e)*q - p where
// mu* = p/q: under r no cycle is negative and minimum-mean cycles have
// weight exactly zero, so after computing Bellman-Ford potentials h the
// arcs with r(e) + h(tail) - h(head) == 0 form a subgraph in which every
// directed cycle attains mu*. Any cycle found there by DFS is returned.
// All comparisons cross-multiply in 128-bit; no floating point is used.
inline std::optional<std::vector<int>> karp_min_mean_cycle(
    int vertex_count, const std::vector<LightArc>& arcs) {
  const int n = vertex_count;
  if (n == 0 || arcs.empty()) return std::nullopt;

  std::vector<std::vector<std::int64_t>> dist(
      n + 1, std::vector<std::int64_t>(n, kInfCost));
  std::fill(dist[0].begin(), dist[0].end(), 0);
  for (int k = 1; k <= n; ++k) {
    const auto& prev = dist[k - 1];
    auto& cur = dist[k];
    for (const LightArc& arc : arcs) {
      if (prev[arc.tail] >= kInfCost) continue;
      const std::int64_t cand = prev[arc.tail] + arc.cost;
      if (cand < cur[arc.head]) cur[arc.head] = cand;
    }
  }

  // Minimum over v of the inner maximum, as an exact fraction p/q.
  bool found = false;
  std::int64_t best_p = 0, best_q = 1;
  for (int v = 0; v < n; ++v) {
    if (dist[n][v] >= kInfCost) continue;
    bool have_inner = false;
    std::int64_t p = 0, q = 1;
    for (int k = 0; k < n; ++k) {
      if (dist[k][v] >= kInfCost) continue;
      const std::int64_t cand_p = dist[n][v] - dist[k][v];
      const std::int64_t cand_q = n - k;
      if (!have_inner || static_cast<__int128>(cand_p) * q >
                             static_cast<__int128>(p) * cand_q) {
        p = cand_p;
        q = cand_q;
        have_inner = true;
      }
    }
    if (!have_inner) continue;
    if (!found || static_cast<__int128>(p) * best_q <
                      static_cast<__int128>(best_p) * q) {
      best_p = p;
      best_q = q;
      found = true;
    }
  }
  if (!found) return std::nullopt;  // acyclic: no walk of n arcs exists
  if (best_p >= 0) return std::nullopt;

  // Reduced costs make the minimum cycle mean exactly zero.
  std::vector<std::int64_t> reduced(arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    reduced[e] = arcs[e].cost * best_q - best_p;
  }

  // Potentials via Bellman-Ford from a virtual all-vertex source. The
  // reduced graph has no negative cycle, so this settles in <= n passes.
  std::vector<__int128> potential(n, 0);
  for (int pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      const __int128 cand = potential[arcs[e].tail] + reduced[e];
      if (cand < potential[arcs[e].head]) {
        potential[arcs[e].head] = cand;
        changed = true;
      }
    }
    if (!changed) break;
    if (pass == n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "min-mean potentials did not converge");
    }
  }

  // DFS over the zero-reduced-cost subgraph; the first closed walk found
  // is a minimum-mean cycle.
  std::vector<std::vector<int>> adjacency(n);
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    const __int128 slack =
        reduced[e] + potential[arcs[e].tail] - potential[arcs[e].head];
    if (slack == 0) adjacency[arcs[e].tail].push_back(static_cast<int>(e));
  }
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> stack_vertex, stack_arc;
  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::size_t> next(n, 0);
    stack_vertex.assign(1, root);
    stack_arc.clear();
    color[root] = 1;
    while (!stack_vertex.empty()) {
      const int v = stack_vertex.back();
      if (next[v] < adjacency[v].size()) {
        const int e = adjacency[v][next[v]++];
        const int w = arcs[e].head;
        if (color[w] == 1) {
          // Unwind to w: arcs from w's stack position onward, plus e.
          std::vector<int> cycle;
          for (std::size_t idx = 0; idx < stack_vertex.size(); ++idx) {
            if (stack_vertex[idx] == w) {
              cycle.assign(stack_arc.begin() + idx, stack_arc.end());
              break;
            }
          }
          cycle.push_back(e);
          return cycle;
        }
        if (color[w] == 0) {
          color[w] = 1;
          stack_vertex.push_back(w);
          stack_arc.push_back(e);
        }
      } else {
        color[v] = 2;
        stack_vertex.pop_back();
        if (!stack_arc.empty()) stack_arc.pop_back();
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "zero-reduced-cost subgraph unexpectedly acyclic");
}

inline std::vector<LightArc> to_light_arcs(const ResidualNetwork& res) {
  std::vector<LightArc> arcs;
  arcs.reserve(res.arcs.size());
  for (const ResidualArc& arc : res.arcs) {
    arcs.push_back({arc.tail, arc.head, arc.cost});
  }
  return arcs;
}

inline Cycle make_cycle(const std::vector<int>& arc_indices,
                        const std::vector<LightArc>& arcs) {
  Cycle cycle;
  cycle.arcs = arc_indices;
  for (int e : arc_indices) cycle.cost += arcs[e].cost;
  return cycle;
}

}  // namespace detail

/// Bellman-Ford-Moore search for any directed cycle of negative total cost
/// in a residual network. Returns std::nullopt when none exists, which is
/// exactly the minimum-cost-flow optimality certificate.
inline std::optional<Cycle> find_negative_cycle(const ResidualNetwork& res) {
  const auto arcs = detail::to_light_arcs(res);
  auto found = detail::bfm_negative_cycle(res.vertex_count, arcs);
  if (!found) return std::nullopt;
  return detail::make_cycle(*found, arcs);
}

/// Returns a cycle minimizing total cost / arc count, or std::nullopt when
/// the graph is acyclic or its minimum cycle mean is >= 0. Means are
/// compared by exact integer cross-multiplication throughout.
inline std::optional<Cycle> find_min_mean_cycle(const ResidualNetwork& res) {
  const auto arcs = detail::to_light_arcs(res);
  auto found = detail::karp_min_mean_cycle(res.vertex_count, arcs);
  if (!found) return std::nullopt;
  return detail::make_cycle(*found, arcs);
}

}  // namespace allocflow

#endif  // ALLOCFLOW_CYCLE_FINDING_HPP_
