#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace convergecast {

using Vertex = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

/// Raised for malformed input (bad files, invalid generator arguments).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exponential-time routine is asked for an instance above its cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

/// Undirected, simple, connected communication graph with a distinguished sink.
///
/// Adjacency lists are sorted. Instances are immutable once constructed; the
/// constructor rejects self-loops, parallel edges, out-of-range ids and
/// disconnected inputs.
class Graph {
 public:
  Graph(Vertex n, Vertex sink, const std::vector<std::pair<Vertex, Vertex>>& edges);

  Vertex n() const { return static_cast<Vertex>(adjacency_.size()); }
  std::int64_t m() const { return m_; }
  Vertex sink() const { return sink_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::int32_t degree(Vertex v) const { return static_cast<std::int32_t>(adjacency_[v].size()); }
  bool has_edge(Vertex u, Vertex v) const;

  /// Edges as (u, v) with u < v, lexicographically ordered.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// Same edge set on the same vertices, different sink.
  Graph with_sink(Vertex sink) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.sink_ == b.sink_ && a.adjacency_ == b.adjacency_;
  }

 private:
  Graph() = default;

  std::vector<std::vector<Vertex>> adjacency_;
  std::int64_t m_ = 0;
  Vertex sink_ = 0;
};

/// Hop distance of every vertex to the sink.
struct Levels {
  std::vector<std::int32_t> level;

  std::int32_t operator[](Vertex v) const { return level[v]; }
  std::int32_t eccentricity() const;
};

Levels bfs_levels(const Graph& g);

/// True when every vertex is reachable from vertex 0 using the given adjacency.
bool is_connected(const std::vector<std::vector<Vertex>>& adjacency);

/// Edge-list text: header "n m sink", then m lines "u v" with u < v.
/// Blank lines and '#' comments are skipped. Errors carry the 1-based line number.
Graph read_graph(std::string_view text);
std::string write_graph(const Graph& g);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace convergecast
