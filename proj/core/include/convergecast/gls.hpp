#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "convergecast/graph.hpp"
#include "convergecast/random.hpp"
#include "convergecast/tree.hpp"

namespace convergecast {

/// Tunable parameters of the genetic local search.
struct GlsParams {
  std::int32_t pop_size = 50;
  std::int32_t offsp_size = 25;
  std::int32_t fp_it_count = 3;
  double sp_proportion = 0.6;
  double p_m = 0.6;
  double p_ls = 0.8;
  std::optional<std::int32_t> k_max;  // unset: floor(n / 3)
  std::uint64_t seed = 1;
  std::int32_t max_generations = 1000;

  std::int32_t resolved_k_max(Vertex n) const { return k_max.value_or(n / 3); }
  /// Throws Error on out-of-range values.
  void validate() const;
};

/// Exact fitness 1 / latency, ordered by value (higher is fitter).
struct Fitness {
  std::int32_t latency = 1;

  friend std::strong_ordering operator<=>(Fitness a, Fitness b) { return b.latency <=> a.latency; }
  friend bool operator==(Fitness, Fitness) = default;
};

struct Member {
  AggregationTree tree;
  std::int32_t latency = 0;

  Fitness fitness() const { return Fitness{latency}; }
};

struct Population {
  std::vector<Member> members;
  std::int32_t generation = 0;
  /// (min fitness, max fitness) after initialization and after every join.
  std::vector<std::pair<Fitness, Fitness>> history;

  const Member& best() const;
  std::pair<Fitness, Fitness> fitness_range() const;
};

/// Shortest-path tree; every vertex takes its lowest-id neighbour one level closer.
AggregationTree spt_tree(const Graph& g);

/// Grows a tree from the sink, adding a uniformly chosen frontier arc that goes
/// exactly one level down each step. Always a shortest-path tree.
AggregationTree random_shortest_path_tree(const Graph& g, const Levels& levels, Rng& rng);

/// Grows a tree from the sink; a frontier arc into tree vertex w is picked with
/// probability proportional to 1 / (deg_T(w) + 1).
AggregationTree random_min_degree_tree(const Graph& g, Rng& rng);

/// SPT first, then random trees until pop_size members exist or fp_it_count
/// clones have been rejected in total.
Population init_population(const Graph& g, const GlsParams& params, Rng& rng);

/// `count` roulette draws with replacement, P(member) proportional to 1 / latency.
/// Sampling is exact: rejection on integer latencies, no floating-point weights.
std::vector<std::size_t> select_parents(const Population& p, std::size_t count, Rng& rng);

/// Weight of inheriting a parent link from a parent tree: 1/deg + 1/|l(v) - l(p) - 2|.
double crossover_weight(std::int32_t parent_tree_degree, std::int32_t child_level, std::int32_t parent_level);

/// Child whose every parent link comes from `first` or `second`, except where
/// both would close a cycle; then a random non-descendant neighbour is used.
AggregationTree crossover(const Graph& g, const AggregationTree& first, const AggregationTree& second,
                          const Levels& levels, Rng& rng);

/// Draws k in {0..k_max} with P(k) proportional to 1 / (k + 1).
std::int32_t draw_mutation_size(std::int32_t k_max, Rng& rng);

/// k random re-parentings along non-tree arcs; moves that would close a cycle
/// are skipped but still count.
AggregationTree mutate_k(const Graph& g, const AggregationTree& t, std::int32_t k, Rng& rng);
AggregationTree mutate(const Graph& g, const AggregationTree& t, const GlsParams& params, Rng& rng);

struct LocalSearchStats {
  std::int32_t moves = 0;
  std::int64_t evaluations = 0;
};

/// Best-improvement descent over single reattachments until none improves.
AggregationTree local_search(const Graph& g, AggregationTree t, LocalSearchStats* stats = nullptr);

/// True when no single reattachment lowers the latency (checked by full recomputation).
bool is_local_optimum(const Graph& g, const AggregationTree& t);

struct RunOptions {
  /// Worker threads for offspring construction; results do not depend on it.
  int jobs = 1;
  /// Wall-clock budget in milliseconds; unset means unlimited.
  std::optional<std::int64_t> time_limit_ms;
  /// Check tree invariants of every member after every generation.
  bool verify_each_generation = false;
};

struct GlsResult {
  AggregationTree tree;
  Schedule schedule;
  std::int32_t latency = 0;
  std::int32_t generations = 0;
  std::int32_t initial_population = 0;
  std::int64_t elapsed_ms = 0;
  bool hit_time_limit = false;
  /// Best population latency after initialization and after each generation;
  /// the returned tree is that member after a final local search, so latency <= back().
  std::vector<std::int32_t> best_history;
};

/// Returns the best member, polished by local_search so the tree is 1-move-optimal.
GlsResult run_gls(const Graph& g, const GlsParams& params, const RunOptions& options = {});

}  // namespace convergecast
