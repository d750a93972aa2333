#include "convergecast/tree.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "text_lines.hpp"

namespace convergecast {
namespace {

std::vector<Vertex> bfs_order(const AggregationTree& t, const std::vector<std::vector<Vertex>>& kids) {
  std::vector<Vertex> order;
  order.reserve(static_cast<std::size_t>(t.n()));
  order.push_back(t.sink());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex c : kids[order[i]]) order.push_back(c);
  }
  return order;
}

// max_i (r_i + i) over ranks sorted descending; `ranks` is clobbered.
std::int32_t combine(std::vector<std::int32_t>& ranks) {
  std::sort(ranks.begin(), ranks.end(), std::greater<>());
  std::int32_t best = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    best = std::max(best, ranks[i] + static_cast<std::int32_t>(i) + 1);
  }
  return best;
}

void require_move(const Graph& g, const AggregationTree& t, Vertex v, Vertex u) {
  if (v < 0 || v >= t.n() || u < 0 || u >= t.n()) throw Error("reattach: vertex out of range");
  if (v == t.sink()) throw Error("reattach: the sink has no parent to change");
  if (!g.has_edge(v, u)) {
    throw Error("reattach: (" + std::to_string(v) + ", " + std::to_string(u) + ") is not an edge");
  }
  for (Vertex x = u; x != kNoVertex; x = t.parent(x)) {
    if (x == v) {
      throw Error("reattach: " + std::to_string(u) + " lies in the subtree of " + std::to_string(v));
    }
  }
}

}  // namespace

AggregationTree::AggregationTree(Vertex sink, std::vector<Vertex> parent)
    : sink_(sink), parent_(std::move(parent)) {}

std::vector<std::vector<Vertex>> AggregationTree::children() const {
  std::vector<std::vector<Vertex>> kids(parent_.size());
  for (Vertex v = 0; v < n(); ++v) {
    if (v != sink_ && parent_[v] >= 0 && parent_[v] < n()) kids[parent_[v]].push_back(v);
  }
  return kids;
}

std::vector<std::int32_t> AggregationTree::degrees() const {
  std::vector<std::int32_t> deg(parent_.size(), 0);
  for (Vertex v = 0; v < n(); ++v) {
    if (v != sink_ && parent_[v] != kNoVertex) {
      ++deg[v];
      ++deg[parent_[v]];
    }
  }
  return deg;
}

std::vector<std::int32_t> AggregationTree::depths() const {
  auto kids = children();
  std::vector<std::int32_t> depth(parent_.size(), 0);
  for (Vertex v : bfs_order(*this, kids)) {
    if (v != sink_) depth[v] = depth[parent_[v]] + 1;
  }
  return depth;
}

std::int32_t AggregationTree::depth() const {
  auto d = depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::int32_t hamming(const AggregationTree& a, const AggregationTree& b) {
  std::int32_t diff = 0;
  for (std::size_t i = 0; i < a.parent_.size(); ++i) diff += a.parent_[i] != b.parent_[i];
  return diff;
}

std::vector<std::string> tree_violations(const Graph& g, const AggregationTree& t) {
  std::vector<std::string> out;
  if (t.n() != g.n()) {
    out.push_back("tree has " + std::to_string(t.n()) + " vertices, graph has " +
                  std::to_string(g.n()));
    return out;
  }
  if (t.sink() != g.sink()) {
    out.push_back("tree is rooted at " + std::to_string(t.sink()) + ", graph sink is " +
                  std::to_string(g.sink()));
  }
  bool links_ok = true;
  for (Vertex v = 0; v < t.n(); ++v) {
    Vertex p = t.parent(v);
    if (v == t.sink()) {
      if (p != kNoVertex) out.push_back("sink " + std::to_string(v) + " has a parent");
      continue;
    }
    if (p < 0 || p >= t.n()) {
      out.push_back("vertex " + std::to_string(v) + " has no valid parent");
      links_ok = false;
    } else if (!g.has_edge(v, p)) {
      out.push_back("parent link " + std::to_string(v) + " -> " + std::to_string(p) +
                    " is not a graph edge");
    }
  }
  if (!links_ok || t.sink() < 0 || t.sink() >= t.n()) return out;
  // 0 = unvisited, 1 = on current walk, 2 = reaches the sink
  std::vector<char> state(static_cast<std::size_t>(t.n()), 0);
  state[t.sink()] = 2;
  for (Vertex v = 0; v < t.n(); ++v) {
    std::vector<Vertex> walk;
    Vertex x = v;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      Vertex p = t.parent(x);
      if (p == kNoVertex) break;
      x = p;
    }
    if (state[x] == 1) {
      out.push_back("parent links from vertex " + std::to_string(v) + " form a cycle");
      for (Vertex w : walk) state[w] = 3;
    } else if (state[x] == 3) {
      out.push_back("vertex " + std::to_string(v) + " does not reach the sink");
      for (Vertex w : walk) state[w] = 3;
    } else {
      for (Vertex w : walk) state[w] = 2;
    }
  }
  return out;
}

std::vector<std::int32_t> subtree_ranks(const AggregationTree& t) {
  auto kids = t.children();
  auto order = bfs_order(t, kids);
  std::vector<std::int32_t> rank(static_cast<std::size_t>(t.n()), 0);
  std::vector<std::int32_t> buffer;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    buffer.clear();
    for (Vertex c : kids[*it]) buffer.push_back(rank[c]);
    rank[*it] = combine(buffer);
  }
  return rank;
}

std::int32_t latency(const AggregationTree& t) { return subtree_ranks(t)[t.sink()]; }

Schedule assign_slots(const AggregationTree& t) {
  auto kids = t.children();
  auto rank = subtree_ranks(t);
  Schedule s;
  s.slot.assign(static_cast<std::size_t>(t.n()), 0);
  s.latency = rank[t.sink()];
  std::vector<std::int32_t> deadline(static_cast<std::size_t>(t.n()), 0);
  deadline[t.sink()] = s.latency;
  for (Vertex v : bfs_order(t, kids)) {
    auto order = kids[v];
    // stable on ascending id, so equal ranks keep id order
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return rank[a] > rank[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
      Vertex c = order[i];
      s.slot[c] = deadline[v] - static_cast<std::int32_t>(i);
      deadline[c] = s.slot[c] - 1;
    }
  }
  return s;
}

std::vector<std::string> check_schedule(const Graph& g, const AggregationTree& t, const Schedule& s) {
  auto out = tree_violations(g, t);
  if (t.n() != g.n()) return out;
  if (s.slot.size() != static_cast<std::size_t>(t.n())) {
    out.push_back("schedule covers " + std::to_string(s.slot.size()) + " vertices, expected " +
                  std::to_string(t.n()));
    return out;
  }
  std::int32_t max_slot = 0;
  std::map<std::pair<Vertex, std::int32_t>, Vertex> first_in_slot;
  for (Vertex v = 0; v < t.n(); ++v) {
    if (v == t.sink()) continue;
    std::int32_t slot = s.slot[v];
    max_slot = std::max(max_slot, slot);
    if (slot <= 0) out.push_back("vertex " + std::to_string(v) + " has nonpositive slot " + std::to_string(slot));
    Vertex p = t.parent(v);
    if (p < 0 || p >= t.n()) continue;
    auto [it, fresh] = first_in_slot.emplace(std::make_pair(p, slot), v);
    if (!fresh) {
      out.push_back("sibling clash: vertices " + std::to_string(it->second) + " and " +
                    std::to_string(v) + " both send to " + std::to_string(p) + " in slot " +
                    std::to_string(slot));
    }
    if (p != t.sink() && slot >= s.slot[p]) {
      out.push_back("ordering: vertex " + std::to_string(v) + " sends in slot " +
                    std::to_string(slot) + " but its parent " + std::to_string(p) +
                    " already sends in slot " + std::to_string(s.slot[p]));
    }
  }
  if (s.latency != max_slot) {
    out.push_back("declared latency " + std::to_string(s.latency) + " differs from last slot " +
                  std::to_string(max_slot));
  }
  return out;
}

std::int32_t reattach_effect_full(const Graph& g, const AggregationTree& t, Vertex v, Vertex u) {
  require_move(g, t, v, u);
  AggregationTree moved = t;
  moved.set_parent(v, u);
  return latency(moved) - latency(t);
}

std::int32_t reattach_effect(const Graph& g, const AggregationTree& t, Vertex v, Vertex u) {
  require_move(g, t, v, u);
  if (t.parent(v) == u) return 0;
  return ReattachEvaluator(t).effect(v, u);
}

AggregationTree apply_reattach(const Graph& g, const AggregationTree& t, Vertex v, Vertex u) {
  require_move(g, t, v, u);
  AggregationTree moved = t;
  moved.set_parent(v, u);
  return moved;
}

ReattachEvaluator::ReattachEvaluator(const AggregationTree& t)
    : tree_(t), children_(t.children()), rank_(subtree_ranks(t)) {
  const auto n = static_cast<std::size_t>(t.n());
  depth_.assign(n, 0);
  enter_.assign(n, 0);
  exit_.assign(n, 0);
  scratch_rank_.assign(n, 0);
  scratch_stamp_.assign(n, 0);
  // iterative preorder numbering; exit_ is the largest enter_ inside the subtree
  std::int32_t clock = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{t.sink(), 0}};
  enter_[t.sink()] = clock++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children_[v].size()) {
      Vertex c = children_[v][next++];
      depth_[c] = depth_[v] + 1;
      enter_[c] = clock++;
      stack.emplace_back(c, 0);
    } else {
      exit_[v] = clock - 1;
      stack.pop_back();
    }
  }
}

std::int32_t ReattachEvaluator::rank_from(Vertex x, Vertex removed, Vertex added) const {
  buffer_.clear();
  for (Vertex c : children_[x]) {
    if (c == removed) continue;
    buffer_.push_back(scratch_stamp_[c] == stamp_ ? scratch_rank_[c] : rank_[c]);
  }
  if (added != kNoVertex) buffer_.push_back(rank_[added]);
  return combine(buffer_);
}

std::int32_t ReattachEvaluator::effect(Vertex v, Vertex u) const {
  if (++stamp_ == 0) {
    std::fill(scratch_stamp_.begin(), scratch_stamp_.end(), 0);
    stamp_ = 1;
  }
  const Vertex old_parent = tree_.parent(v);
  Vertex a = old_parent;
  Vertex b = u;
  // Walk both root paths deepest-first so each vertex is re-ranked after its
  // affected child; the paths merge at their lowest common ancestor.
  while (true) {
    Vertex x;
    if (a == b) {
      x = a;
      a = b = tree_.parent(a);
    } else if (depth_[a] >= depth_[b]) {
      x = a;
      a = tree_.parent(a);
    } else {
      x = b;
      b = tree_.parent(b);
    }
    scratch_rank_[x] = rank_from(x, x == old_parent ? v : kNoVertex, x == u ? v : kNoVertex);
    scratch_stamp_[x] = stamp_;
    if (x == tree_.sink()) break;
  }
  return scratch_rank_[tree_.sink()] - rank_[tree_.sink()];
}

std::string write_schedule(const AggregationTree& t, const Schedule& s) {
  std::string out = std::to_string(t.n()) + " " + std::to_string(t.sink()) + " " +
                    std::to_string(s.latency) + "\n";
  for (Vertex v = 0; v < t.n(); ++v) {
    if (v == t.sink()) continue;
    out += std::to_string(v) + " " + std::to_string(t.parent(v)) + " " + std::to_string(s.slot[v]) + "\n";
  }
  return out;
}

ScheduleFile read_schedule(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error("line 1: missing header \"n sink latency\"");
  const auto& header = lines.front();
  if (header.fields.size() != 3) detail::fail_at(header.number, "header must be \"n sink latency\"");
  auto n = detail::int_field(header, 0, "n");
  auto sink = detail::int_field(header, 1, "sink");
  auto lat = detail::int_field(header, 2, "latency");
  if (n < 1 || n > (1 << 30)) detail::fail_at(header.number, "vertex count out of range");
  if (sink < 0 || sink >= n) detail::fail_at(header.number, "sink out of range");
  if (static_cast<std::int64_t>(lines.size()) != n) {
    detail::fail_at(lines.back().number, "expected " + std::to_string(n - 1) +
                                             " vertex lines, found " + std::to_string(lines.size() - 1));
  }
  std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Schedule s;
  s.slot.assign(static_cast<std::size_t>(n), 0);
  s.latency = static_cast<std::int32_t>(lat);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.fields.size() != 3) detail::fail_at(line.number, "vertex line must be \"v parent slot\"");
    auto v = detail::int_field(line, 0, "v");
    auto p = detail::int_field(line, 1, "parent");
    auto slot = detail::int_field(line, 2, "slot");
    if (v < 0 || v >= n || p < 0 || p >= n) detail::fail_at(line.number, "vertex id out of range");
    if (v == sink) detail::fail_at(line.number, "the sink must not be listed");
    if (seen[v]) detail::fail_at(line.number, "vertex " + std::to_string(v) + " listed twice");
    seen[v] = 1;
    parent[v] = static_cast<Vertex>(p);
    s.slot[v] = static_cast<std::int32_t>(slot);
  }
  return {AggregationTree(static_cast<Vertex>(sink), std::move(parent)), std::move(s)};
}

ScheduleFile load_schedule(const std::string& path) {
  try {
    return read_schedule(detail::slurp(path));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void save_schedule(const AggregationTree& t, const Schedule& s, const std::string& path) {
  detail::dump(path, write_schedule(t, s));
}

}  // namespace convergecast
