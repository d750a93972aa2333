#include "convergecast/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "text_lines.hpp"

namespace convergecast {

Graph::Graph(Vertex n, Vertex sink, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  if (n < 1) throw Error("graph needs at least one vertex");
  if (sink < 0 || sink >= n) {
    throw Error("sink " + std::to_string(sink) + " out of range [0, " + std::to_string(n) + ")");
  }
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw Error("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    }
    if (u == v) throw Error("self-loop at vertex " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) throw Error("parallel edge");
  }
  m_ = static_cast<std::int64_t>(edges.size());
  sink_ = sink;
  if (!is_connected(adjacency_)) throw Error("graph is not connected");
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (Vertex u = 0; u < n(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::with_sink(Vertex sink) const {
  if (sink < 0 || sink >= n()) throw Error("sink " + std::to_string(sink) + " out of range");
  Graph g = *this;
  g.sink_ = sink;
  return g;
}

bool is_connected(const std::vector<std::vector<Vertex>>& adjacency) {
  if (adjacency.empty()) return true;
  std::vector<char> seen(adjacency.size(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == adjacency.size();
}

std::int32_t Levels::eccentricity() const {
  return level.empty() ? 0 : *std::max_element(level.begin(), level.end());
}

Levels bfs_levels(const Graph& g) {
  Levels out{std::vector<std::int32_t>(static_cast<std::size_t>(g.n()), -1)};
  std::deque<Vertex> queue{g.sink()};
  out.level[g.sink()] = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v)) {
      if (out.level[w] < 0) {
        out.level[w] = out.level[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return out;
}

Graph read_graph(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error("line 1: missing header \"n m sink\"");
  const auto& header = lines.front();
  if (header.fields.size() != 3) detail::fail_at(header.number, "header must be \"n m sink\"");
  auto n = detail::int_field(header, 0, "n");
  auto m = detail::int_field(header, 1, "m");
  auto sink = detail::int_field(header, 2, "sink");
  if (n < 1 || n > (1 << 30)) detail::fail_at(header.number, "vertex count out of range");
  if (m < 0) detail::fail_at(header.number, "negative edge count");
  if (sink < 0 || sink >= n) {
    detail::fail_at(header.number, "sink " + std::to_string(sink) + " out of range [0, " +
                                       std::to_string(n) + ")");
  }
  if (static_cast<std::int64_t>(lines.size()) - 1 != m) {
    int where = lines.size() > static_cast<std::size_t>(m) + 1
                    ? lines[static_cast<std::size_t>(m) + 1].number
                    : lines.back().number;
    detail::fail_at(where, "header declares " + std::to_string(m) + " edges, found " +
                               std::to_string(lines.size() - 1));
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.fields.size() != 2) detail::fail_at(line.number, "edge line must be \"u v\"");
    auto u = detail::int_field(line, 0, "u");
    auto v = detail::int_field(line, 1, "v");
    if (u < 0 || u >= n || v < 0 || v >= n) detail::fail_at(line.number, "vertex id out of range");
    if (u == v) detail::fail_at(line.number, "self-loop");
    if (u > v) std::swap(u, v);
    if (!seen.emplace(static_cast<Vertex>(u), static_cast<Vertex>(v)).second) {
      detail::fail_at(line.number, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  try {
    return Graph(static_cast<Vertex>(n), static_cast<Vertex>(sink), edges);
  } catch (const Error& e) {
    detail::fail_at(lines.back().number, e.what());
  }
}

std::string write_graph(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + " " +
                    std::to_string(g.sink()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

Graph load_graph(const std::string& path) {
  try {
    return read_graph(detail::slurp(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void save_graph(const Graph& g, const std::string& path) { detail::dump(path, write_graph(g)); }

}  // namespace convergecast
