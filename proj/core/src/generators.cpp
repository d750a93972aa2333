#include "convergecast/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "convergecast/random.hpp"

namespace convergecast {
namespace {

using EdgeSet = std::set<std::pair<Vertex, Vertex>>;

void add_edge(EdgeSet& edges, Vertex u, Vertex v) {
  if (u == v) return;
  edges.emplace(std::min(u, v), std::max(u, v));
}

Graph from_set(Vertex n, const EdgeSet& edges) {
  return Graph(n, 0, std::vector<std::pair<Vertex, Vertex>>(edges.begin(), edges.end()));
}

void check_dimension(int d, const char* family) {
  if (d < 2) throw Error(std::string(family) + ": dimension must be >= 2, got " + std::to_string(d));
  if (d > 20) throw Error(std::string(family) + ": dimension " + std::to_string(d) + " too large");
}

template <class Draw>
Graph redraw_until_connected(Vertex n, int max_attempts, const char* family, Draw&& draw) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::vector<Vertex>> adjacency(static_cast<std::size_t>(n));
    std::vector<std::pair<Vertex, Vertex>> edges = draw();
    for (auto [u, v] : edges) {
      adjacency[u].push_back(v);
      adjacency[v].push_back(u);
    }
    if (is_connected(adjacency)) return Graph(n, 0, edges);
  }
  throw Error(std::string(family) + ": no connected graph after " + std::to_string(max_attempts) +
              " draws; edge probability too small");
}

}  // namespace

Graph gen_ccc(int d) {
  check_dimension(d, "ccc");
  const Vertex corners = Vertex{1} << d;
  auto id = [&](int i, Vertex w) { return static_cast<Vertex>(i) * corners + w; };
  EdgeSet edges;
  for (int i = 0; i < d; ++i) {
    for (Vertex w = 0; w < corners; ++w) {
      add_edge(edges, id(i, w), id((i + 1) % d, w));
      add_edge(edges, id(i, w), id(i, w ^ (Vertex{1} << i)));
    }
  }
  return from_set(static_cast<Vertex>(d) * corners, edges);
}

Graph gen_butterfly(int d) {
  check_dimension(d, "bf");
  const Vertex corners = Vertex{1} << d;
  auto id = [&](int i, Vertex w) { return static_cast<Vertex>(i) * corners + w; };
  EdgeSet edges;
  for (int i = 0; i < d; ++i) {
    for (Vertex w = 0; w < corners; ++w) {
      add_edge(edges, id(i, w), id((i + 1) % d, w));
      add_edge(edges, id(i, w), id((i + 1) % d, w ^ (Vertex{1} << i)));
    }
  }
  return from_set(static_cast<Vertex>(d) * corners, edges);
}

Graph gen_shuffle_exchange(int d) {
  check_dimension(d, "se");
  const Vertex n = Vertex{1} << d;
  EdgeSet edges;
  for (Vertex w = 0; w < n; ++w) {
    add_edge(edges, w, w ^ 1);
    Vertex rotated = ((w << 1) | (w >> (d - 1))) & (n - 1);
    add_edge(edges, w, rotated);
  }
  return from_set(n, edges);
}

Graph gen_pure_random(Vertex n, double p, std::uint64_t seed, int max_attempts) {
  if (n < 2) throw Error("random: need n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw Error("random: edge probability must lie in (0, 1]");
  Rng rng(seed);
  return redraw_until_connected(n, max_attempts, "random", [&] {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (bernoulli(rng, p)) edges.emplace_back(u, v);
      }
    }
    return edges;
  });
}

Graph gen_waxman(Vertex n, double alpha, double beta, std::uint64_t seed, int max_attempts) {
  if (n < 2) throw Error("waxman: need n >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
    throw Error("waxman: alpha and beta must lie in (0, 1]");
  }
  Rng rng(seed);
  const double scale = beta * std::sqrt(2.0);
  return redraw_until_connected(n, max_attempts, "waxman", [&] {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) {
      x[v] = uniform_real(rng);
      y[v] = uniform_real(rng);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        double dist = std::hypot(x[u] - x[v], y[u] - y[v]);
        if (bernoulli(rng, alpha * std::exp(-dist / scale))) edges.emplace_back(u, v);
      }
    }
    return edges;
  });
}

Graph gen_path(Vertex n) {
  if (n < 1) throw Error("path: need n >= 1");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return Graph(n, 0, edges);
}

Graph gen_star(Vertex leaves) {
  if (leaves < 1) throw Error("star: need at least one leaf");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, 0, edges);
}

Graph gen_cycle(Vertex n) {
  if (n < 3) throw Error("cycle: need n >= 3");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  edges.emplace_back(0, n - 1);
  return Graph(n, 0, edges);
}

Graph gen_complete(Vertex n) {
  if (n < 1) throw Error("complete: need n >= 1");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, 0, edges);
}

}  // namespace convergecast
