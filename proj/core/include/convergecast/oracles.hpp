#pragma once

#include <cstdint>

#include "convergecast/graph.hpp"
#include "convergecast/tree.hpp"

namespace convergecast {

inline constexpr Vertex kExactMaxVertices = 16;
inline constexpr Vertex kExhaustiveMaxVertices = 9;

/// Minimum number of rounds to inform every vertex from the sink when each
/// informed vertex calls at most one uninformed neighbour per round. By time
/// reversal this is the optimal convergecast latency.
///
/// Breadth-first search over informed sets. A round moves S to S | T where T
/// is a set of uninformed neighbours that can be matched into S; only
/// maximum matchable T are expanded (matchable sets form a transversal
/// matroid, and a larger informed set is never worse).
/// Throws SizeCapError when n exceeds kExactMaxVertices.
std::int32_t broadcast_time_exact(const Graph& g);

struct ExactResult {
  std::int32_t latency = 0;
  /// Who informed whom, reversed: parent(v) is the vertex that informed v.
  AggregationTree tree;
  std::int64_t states_expanded = 0;
};

/// broadcast_time_exact plus an optimal tree rebuilt from the search path.
ExactResult broadcast_schedule_exact(const Graph& g);

struct ExhaustiveResult {
  AggregationTree tree;
  std::int32_t latency = 0;
  std::int64_t trees_visited = 0;
};

/// Enumerates every spanning tree (include/exclude on frontier edges, pruning
/// exclusions that disconnect the graph) and keeps one of minimum latency.
/// Throws SizeCapError when n exceeds kExhaustiveMaxVertices.
ExhaustiveResult best_tree_exhaustive(const Graph& g);

struct BoundReport {
  std::int32_t lb_log = 0;  // ceil(log2 n)
  std::int32_t lb_ecc = 0;  // eccentricity of the sink
  std::int32_t lb = 0;
};

BoundReport lower_bound(const Graph& g);

std::int32_t ceil_log2(std::int64_t n);

}  // namespace convergecast
