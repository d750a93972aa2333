#include "convergecast/oracles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <stdexcept>
#include <vector>

namespace convergecast {
namespace {

using Mask = std::uint32_t;

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (Vertex w : g.neighbors(v)) adj[v] |= Mask{1} << w;
  }
  return adj;
}

// Bipartite matching of targets into informers by augmenting paths.
class Matcher {
 public:
  explicit Matcher(const std::vector<Mask>& adj) : adj_(adj), owner_(adj.size(), kNoVertex) {}

  /// Size of a maximum matching of `targets` into `informers`.
  int max_matching(Mask informers, Mask targets) {
    informers_ = informers;
    std::fill(owner_.begin(), owner_.end(), kNoVertex);
    int size = 0;
    for (Mask rest = targets; rest != 0; rest &= rest - 1) {
      Mask tried = 0;
      if (augment(static_cast<Vertex>(std::countr_zero(rest)), tried)) ++size;
    }
    return size;
  }

  bool matchable(Mask informers, Mask targets) {
    return max_matching(informers, targets) == std::popcount(targets);
  }

  /// Target matched to `informer` by the last call, or kNoVertex.
  Vertex matched_target(Vertex informer) const { return owner_[informer]; }

 private:
  bool augment(Vertex target, Mask& tried) {
    for (Mask cand = adj_[target] & informers_ & ~tried; cand != 0; cand &= cand - 1) {
      auto informer = static_cast<Vertex>(std::countr_zero(cand));
      tried |= Mask{1} << informer;
      if (owner_[informer] == kNoVertex || augment(owner_[informer], tried)) {
        owner_[informer] = target;
        return true;
      }
    }
    return false;
  }

  const std::vector<Mask>& adj_;
  std::vector<Vertex> owner_;
  Mask informers_ = 0;
};

class TreeEnumerator {
 public:
  explicit TreeEnumerator(const Graph& g)
      : g_(g), n_(g.n()), edges_(g.edges()), full_((Mask{1} << g.n()) - 1) {
    parent_.fill(kNoVertex);
    order_.push_back(g.sink());
  }

  ExhaustiveResult run() {
    best_.latency = n_;  // any spanning tree does better
    recurse(Mask{1} << g_.sink(), 0);
    return best_;
  }

 private:
  void recurse(Mask in_tree, std::uint64_t excluded) {
    if (in_tree == full_) {
      evaluate();
      return;
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (excluded >> e & 1) continue;
      auto [a, b] = edges_[e];
      bool a_in = in_tree >> a & 1, b_in = in_tree >> b & 1;
      if (a_in == b_in) continue;
      Vertex inside = a_in ? a : b;
      Vertex outside = a_in ? b : a;
      parent_[outside] = inside;
      order_.push_back(outside);
      recurse(in_tree | Mask{1} << outside, excluded);
      order_.pop_back();
      parent_[outside] = kNoVertex;
      std::uint64_t without = excluded | std::uint64_t{1} << e;
      if (connected_without(without)) recurse(in_tree, without);
      return;
    }
  }

  bool connected_without(std::uint64_t excluded) const {
    std::array<Mask, kExhaustiveMaxVertices> adj{};
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (excluded >> e & 1) continue;
      auto [a, b] = edges_[e];
      adj[a] |= Mask{1} << b;
      adj[b] |= Mask{1} << a;
    }
    Mask seen = 1, frontier = 1;
    while (frontier != 0) {
      Mask next = 0;
      for (Mask f = frontier; f != 0; f &= f - 1) next |= adj[std::countr_zero(f)];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == full_;
  }

  // order_ lists vertices parent-before-child, so a reverse sweep ranks them.
  void evaluate() {
    ++best_.trees_visited;
    std::array<std::array<std::int32_t, kExhaustiveMaxVertices>, kExhaustiveMaxVertices> child_ranks;
    std::array<int, kExhaustiveMaxVertices> child_count{};
    std::array<std::int32_t, kExhaustiveMaxVertices> rank{};
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      Vertex v = *it;
      auto& ranks = child_ranks[v];
      int k = child_count[v];
      std::sort(ranks.begin(), ranks.begin() + k, std::greater<>());
      std::int32_t r = 0;
      for (int i = 0; i < k; ++i) r = std::max(r, ranks[i] + i + 1);
      rank[v] = r;
      if (v != g_.sink()) child_ranks[parent_[v]][child_count[parent_[v]]++] = r;
    }
    if (rank[g_.sink()] < best_.latency || best_.tree.n() == 0) {
      best_.latency = rank[g_.sink()];
      best_.tree = AggregationTree(g_.sink(), std::vector<Vertex>(parent_.begin(), parent_.begin() + n_));
    }
  }

  const Graph& g_;
  Vertex n_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  Mask full_;
  std::array<Vertex, kExhaustiveMaxVertices> parent_{};
  std::vector<Vertex> order_;
  ExhaustiveResult best_;
};

}  // namespace

std::int32_t ceil_log2(std::int64_t n) {
  std::int32_t k = 0;
  while ((std::int64_t{1} << k) < n) ++k;
  return k;
}

std::int32_t broadcast_time_exact(const Graph& g) { return broadcast_schedule_exact(g).latency; }

ExactResult broadcast_schedule_exact(const Graph& g) {
  if (g.n() > kExactMaxVertices) {
    throw SizeCapError("exact solver supports at most " + std::to_string(kExactMaxVertices) +
                       " vertices, graph has " + std::to_string(g.n()));
  }
  constexpr Mask kUnseen = ~Mask{0};
  const auto adj = adjacency_masks(g);
  const Mask full = (Mask{1} << g.n()) - 1;
  Matcher matcher(adj);
  // predecessor informed set of every reached state
  std::vector<Mask> came_from(std::size_t{1} << g.n(), kUnseen);
  const Mask start = Mask{1} << g.sink();
  came_from[start] = start;
  std::vector<Mask> layer{start};
  ExactResult result;
  for (std::int32_t rounds = 0;; ++rounds) {
    std::vector<Mask> next;
    for (Mask informed : layer) {
      ++result.states_expanded;
      if (std::popcount(informed) > (std::int64_t{1} << std::min(rounds, 31))) {
        throw std::logic_error("informed set outgrew the doubling bound");
      }
      if (informed == full) {
        result.latency = rounds;
        // replay the path, recovering each round's matching
        std::vector<Vertex> parent(static_cast<std::size_t>(g.n()), kNoVertex);
        for (Mask state = informed; state != start;) {
          Mask before = came_from[state];
          if (!matcher.matchable(before, state & ~before)) throw std::logic_error("broken search path");
          for (Mask s = before; s != 0; s &= s - 1) {
            auto informer = static_cast<Vertex>(std::countr_zero(s));
            Vertex target = matcher.matched_target(informer);
            if (target != kNoVertex) parent[target] = informer;
          }
          state = before;
        }
        result.tree = AggregationTree(g.sink(), std::move(parent));
        return result;
      }
      Mask frontier = 0;
      for (Mask s = informed; s != 0; s &= s - 1) frontier |= adj[std::countr_zero(s)];
      frontier &= ~informed;
      const int best = matcher.max_matching(informed, frontier);
      // all submasks of the frontier with exactly `best` members
      for (Mask sub = frontier;; sub = (sub - 1) & frontier) {
        if (std::popcount(sub) == best && matcher.matchable(informed, sub)) {
          Mask grown = informed | sub;
          if (came_from[grown] == kUnseen) {
            came_from[grown] = informed;
            next.push_back(grown);
          }
        }
        if (sub == 0) break;
      }
    }
    if (next.empty()) throw std::logic_error("broadcast search stalled on a connected graph");
    layer = std::move(next);
  }
}

ExhaustiveResult best_tree_exhaustive(const Graph& g) {
  if (g.n() > kExhaustiveMaxVertices) {
    throw SizeCapError("exhaustive tree search supports at most " +
                       std::to_string(kExhaustiveMaxVertices) + " vertices, graph has " +
                       std::to_string(g.n()));
  }
  return TreeEnumerator(g).run();
}

BoundReport lower_bound(const Graph& g) {
  BoundReport r;
  r.lb_log = ceil_log2(g.n());
  r.lb_ecc = bfs_levels(g).eccentricity();
  r.lb = std::max(r.lb_log, r.lb_ecc);
  return r;
}

}  // namespace convergecast
