#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "convergecast/generators.hpp"
#include "convergecast/graph.hpp"
#include "convergecast/oracles.hpp"
#include "convergecast/random.hpp"
#include "convergecast/tree.hpp"

namespace testing_support {

using namespace convergecast;

inline Graph tree_as_graph(const AggregationTree& t) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 0; v < t.n(); ++v) {
    if (v != t.sink()) edges.emplace_back(std::min(v, t.parent(v)), std::max(v, t.parent(v)));
  }
  return Graph(t.n(), t.sink(), edges);
}

// Optimal latency of a fixed tree, found by the broadcast search on the tree
// itself. Shares no code with the rank recursion.
inline std::int32_t tree_latency_oracle(const AggregationTree& t) { return broadcast_time_exact(tree_as_graph(t)); }

// Random labeled tree: vertices in shuffled order, each attached to a uniformly chosen earlier one.
inline AggregationTree random_tree(Vertex n, Vertex sink, Rng& rng) {
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::swap(order[0], order[sink]);
  shuffle(order.begin() + 1, order.end(), rng);
  std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
  for (std::size_t i = 1; i < order.size(); ++i) parent[order[i]] = order[uniform_index(rng, i)];
  return AggregationTree(sink, parent);
}

// Connected graph on n vertices: random tree plus each other pair with probability p.
inline Graph random_connected(Vertex n, double p, Rng& rng) {
  auto t = random_tree(n, 0, rng);
  std::set<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace(std::min(v, t.parent(v)), std::max(v, t.parent(v)));
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (bernoulli(rng, p)) edges.emplace(u, v);
    }
  }
  auto sink = static_cast<Vertex>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  return Graph(n, sink, {edges.begin(), edges.end()});
}

// Spanning tree count by the matrix-tree theorem; long double is exact enough for n <= 9.
inline std::int64_t spanning_tree_count(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  if (n == 1) return 1;
  std::vector<std::vector<long double>> lap(n - 1, std::vector<long double>(n - 1, 0));
  for (auto [u, v] : g.edges()) {
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (a == 0) continue;
      lap[a - 1][a - 1] += 1;
      if (b != 0) lap[a - 1][b - 1] -= 1;
    }
  }
  long double det = 1;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r + 1 < n; ++r) {
      if (std::abs(lap[r][c]) > std::abs(lap[piv][c])) piv = r;
    }
    if (lap[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(lap[piv], lap[c]);
      det = -det;
    }
    det *= lap[c][c];
    for (std::size_t r = c + 1; r + 1 < n; ++r) {
      long double f = lap[r][c] / lap[c][c];
      for (std::size_t k = c; k + 1 < n; ++k) lap[r][k] -= f * lap[c][k];
    }
  }
  return static_cast<std::int64_t>(std::llround(det));
}

// Arc set A used by both models: ordered pairs (i, j) along edges with i != sink.
inline std::int64_t arc_count(const Graph& g) {
  std::int64_t a = 0;
  for (Vertex i = 0; i < g.n(); ++i) {
    if (i != g.sink()) a += g.degree(i);
  }
  return a;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("convergecast_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
