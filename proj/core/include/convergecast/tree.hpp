#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "convergecast/graph.hpp"

namespace convergecast {

/// Spanning tree rooted at the sink, stored as one parent link per vertex
/// (kNoVertex at the sink). Arcs point child -> parent, the direction data
/// travels. The type does not enforce tree structure; see tree_violations().
class AggregationTree {
 public:
  AggregationTree() = default;
  AggregationTree(Vertex sink, std::vector<Vertex> parent);

  Vertex n() const { return static_cast<Vertex>(parent_.size()); }
  Vertex sink() const { return sink_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  const std::vector<Vertex>& parents() const { return parent_; }
  void set_parent(Vertex v, Vertex p) { parent_[v] = p; }

  /// Children lists in ascending vertex order.
  std::vector<std::vector<Vertex>> children() const;
  /// Tree degree: number of children plus one for a parent link.
  std::vector<std::int32_t> degrees() const;
  /// Hop count to the sink per vertex; requires a valid tree.
  std::vector<std::int32_t> depths() const;
  std::int32_t depth() const;

  /// Number of vertices whose parent differs.
  friend std::int32_t hamming(const AggregationTree& a, const AggregationTree& b);

  friend bool operator==(const AggregationTree&, const AggregationTree&) = default;

 private:
  Vertex sink_ = 0;
  std::vector<Vertex> parent_;
};

/// Empty when `t` is a spanning tree of `g` rooted at g.sink() using graph edges.
std::vector<std::string> tree_violations(const Graph& g, const AggregationTree& t);

/// Transmission slot per vertex (0 at the sink) and the resulting latency.
struct Schedule {
  std::vector<std::int32_t> slot;
  std::int32_t latency = 0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Per-vertex completion rank r: r(leaf) = 0, and for children sorted by r
/// descending, r(v) = max_i r(c_i) + i (1-based).
std::vector<std::int32_t> subtree_ranks(const AggregationTree& t);

/// Minimum convergecast latency achievable on the fixed tree `t`, in O(n log n).
std::int32_t latency(const AggregationTree& t);

/// Latest-first witness schedule whose latency equals latency(t).
Schedule assign_slots(const AggregationTree& t);

/// Every violated scheduling condition, one message per violation.
std::vector<std::string> check_schedule(const Graph& g, const AggregationTree& t, const Schedule& s);

/// latency(t with parent(v) = u) - latency(t); `t` is not modified.
/// Throws Error if the move is not a graph edge or would create a cycle.
std::int32_t reattach_effect(const Graph& g, const AggregationTree& t, Vertex v, Vertex u);

/// Reference for reattach_effect: rebuilds the tree and recomputes both latencies.
std::int32_t reattach_effect_full(const Graph& g, const AggregationTree& t, Vertex v, Vertex u);

/// Copy of `t` with parent(v) = u; rejects cycle-creating or non-edge requests.
AggregationTree apply_reattach(const Graph& g, const AggregationTree& t, Vertex v, Vertex u);

/// Cached tree state for evaluating many reattachments of one tree: only the
/// two root paths touched by a move are re-ranked.
class ReattachEvaluator {
 public:
  explicit ReattachEvaluator(const AggregationTree& t);

  std::int32_t latency() const { return rank_[tree_.sink()]; }
  /// True when `u` lies in the subtree rooted at `v` (v counts as its own descendant).
  bool is_descendant(Vertex u, Vertex v) const {
    return enter_[v] <= enter_[u] && exit_[u] <= exit_[v];
  }
  /// Precondition: u != parent(v), u outside subtree(v), v != sink.
  std::int32_t effect(Vertex v, Vertex u) const;

 private:
  std::int32_t rank_from(Vertex x, Vertex removed, Vertex added) const;

  AggregationTree tree_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::int32_t> rank_;
  std::vector<std::int32_t> depth_;
  std::vector<std::int32_t> enter_, exit_;
  mutable std::vector<std::int32_t> scratch_rank_;
  mutable std::vector<std::uint32_t> scratch_stamp_;
  mutable std::uint32_t stamp_ = 0;
  mutable std::vector<std::int32_t> buffer_;
};

/// Schedule text: header "n sink latency", then one line "v parent slot" per non-sink vertex.
std::string write_schedule(const AggregationTree& t, const Schedule& s);

struct ScheduleFile {
  AggregationTree tree;
  Schedule schedule;
};

ScheduleFile read_schedule(std::string_view text);
ScheduleFile load_schedule(const std::string& path);
void save_schedule(const AggregationTree& t, const Schedule& s, const std::string& path);

}  // namespace convergecast
