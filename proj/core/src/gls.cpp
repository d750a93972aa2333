#include "convergecast/gls.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace convergecast {
namespace {

// Stream ids for stream_seed(); offspring use kOffspringBase + index.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kSelectStream = 2;
constexpr std::uint64_t kOffspringBase = 16;

class Components {
 public:
  explicit Components(Vertex n) : up_(static_cast<std::size_t>(n)) {
    std::iota(up_.begin(), up_.end(), 0);
  }
  Vertex find(Vertex v) {
    while (up_[v] != v) {
      up_[v] = up_[up_[v]];
      v = up_[v];
    }
    return v;
  }
  void unite(Vertex a, Vertex b) { up_[find(a)] = find(b); }

 private:
  std::vector<Vertex> up_;
};

bool is_ancestor_or_self(const AggregationTree& t, Vertex candidate, Vertex v) {
  for (Vertex x = v; x != kNoVertex; x = t.parent(x)) {
    if (x == candidate) return true;
  }
  return false;
}

template <class Accept>
AggregationTree grow_tree(const Graph& g, Rng& rng, Accept&& accept) {
  const Vertex n = g.n();
  std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> degree(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<Vertex, Vertex>> frontier;  // (outside child, tree vertex)
  auto admit = [&](Vertex w) {
    in_tree[w] = 1;
    for (Vertex u : g.neighbors(w)) {
      if (!in_tree[u] && accept.eligible(u, w)) frontier.emplace_back(u, w);
    }
  };
  admit(g.sink());
  for (Vertex added = 1; added < n;) {
    if (frontier.empty()) throw std::logic_error("tree growth ran out of frontier arcs");
    auto i = uniform_index(rng, frontier.size());
    auto [u, w] = frontier[i];
    if (in_tree[u]) {
      frontier[i] = frontier.back();
      frontier.pop_back();
      continue;
    }
    if (!accept.take(degree[w], rng)) continue;
    frontier[i] = frontier.back();
    frontier.pop_back();
    parent[u] = w;
    ++degree[w];
    ++degree[u];
    admit(u);
    ++added;
  }
  return AggregationTree(g.sink(), std::move(parent));
}

}  // namespace

void GlsParams::validate() const {
  auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (pop_size < 2) throw Error("pop_size must be >= 2");
  if (offsp_size < 1) throw Error("offsp_size must be >= 1");
  if (fp_it_count < 0) throw Error("fp_it_count must be >= 0");
  if (!probability(sp_proportion) || !probability(p_m) || !probability(p_ls)) {
    throw Error("sp_proportion, p_m and p_ls must lie in [0, 1]");
  }
  if (k_max && *k_max < 0) throw Error("k_max must be >= 0");
  if (max_generations < 0) throw Error("max_generations must be >= 0");
}

const Member& Population::best() const {
  return *std::min_element(members.begin(), members.end(),
                           [](const Member& a, const Member& b) { return a.latency < b.latency; });
}

std::pair<Fitness, Fitness> Population::fitness_range() const {
  auto [lo, hi] = std::minmax_element(members.begin(), members.end(),
                                      [](const Member& a, const Member& b) { return a.latency < b.latency; });
  // lowest fitness = highest latency
  return {hi->fitness(), lo->fitness()};
}

AggregationTree spt_tree(const Graph& g) {
  auto levels = bfs_levels(g);
  std::vector<Vertex> parent(static_cast<std::size_t>(g.n()), kNoVertex);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (v == g.sink()) continue;
    for (Vertex w : g.neighbors(v)) {
      if (levels[w] == levels[v] - 1) {
        parent[v] = w;
        break;
      }
    }
  }
  return AggregationTree(g.sink(), std::move(parent));
}

AggregationTree random_shortest_path_tree(const Graph& g, const Levels& levels, Rng& rng) {
  struct {
    const Levels& levels;
    bool eligible(Vertex u, Vertex w) const { return levels[u] == levels[w] + 1; }
    bool take(std::int32_t, Rng&) const { return true; }
  } rule{levels};
  return grow_tree(g, rng, rule);
}

AggregationTree random_min_degree_tree(const Graph& g, Rng& rng) {
  struct {
    bool eligible(Vertex, Vertex) const { return true; }
    bool take(std::int32_t degree, Rng& r) const {
      return uniform_index(r, static_cast<std::uint64_t>(degree) + 1) == 0;
    }
  } rule;
  return grow_tree(g, rng, rule);
}

Population init_population(const Graph& g, const GlsParams& params, Rng& rng) {
  params.validate();
  auto levels = bfs_levels(g);
  Population pop;
  std::set<std::vector<Vertex>> seen;
  auto add = [&](AggregationTree t) {
    seen.insert(t.parents());
    std::int32_t lat = latency(t);
    pop.members.push_back(Member{std::move(t), lat});
  };
  add(spt_tree(g));
  // The failure counter is never reset: fp_it_count bounds total clones.
  for (std::int32_t failures = 0;
       failures < params.fp_it_count && static_cast<std::int32_t>(pop.members.size()) < params.pop_size;) {
    AggregationTree t = uniform_real(rng) < params.sp_proportion ? random_shortest_path_tree(g, levels, rng)
                                                                 : random_min_degree_tree(g, rng);
    if (seen.contains(t.parents())) {
      ++failures;
    } else {
      add(std::move(t));
    }
  }
  pop.history.push_back(pop.fitness_range());
  return pop;
}

std::vector<std::size_t> select_parents(const Population& p, std::size_t count, Rng& rng) {
  if (p.members.empty()) throw Error("selection from an empty population");
  std::int32_t min_latency = p.best().latency;
  std::vector<std::size_t> picks;
  picks.reserve(count);
  while (picks.size() < count) {
    auto i = uniform_index(rng, p.members.size());
    auto lat = static_cast<std::uint64_t>(std::max(p.members[i].latency, 1));
    // accept with probability min_latency / latency
    if (uniform_index(rng, lat) < static_cast<std::uint64_t>(std::max(min_latency, 1))) picks.push_back(i);
  }
  return picks;
}

double crossover_weight(std::int32_t parent_tree_degree, std::int32_t child_level, std::int32_t parent_level) {
  return 1.0 / parent_tree_degree + 1.0 / std::abs(child_level - parent_level - 2);
}

AggregationTree crossover(const Graph& g, const AggregationTree& first, const AggregationTree& second,
                          const Levels& levels, Rng& rng) {
  constexpr int kRestarts = 5;
  const Vertex n = g.n();
  const auto deg_first = first.degrees();
  const auto deg_second = second.degrees();
  std::vector<Vertex> order;
  for (Vertex v = 0; v < n; ++v) {
    if (v != g.sink()) order.push_back(v);
  }
  for (int attempt = 0; attempt <= kRestarts; ++attempt) {
    shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return levels[a] < levels[b]; });
    Components comp(n);
    std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
    bool stuck = false;
    for (Vertex v : order) {
      const Vertex a = first.parent(v);
      const Vertex b = second.parent(v);
      const bool a_closes = comp.find(a) == comp.find(v);
      const bool b_closes = comp.find(b) == comp.find(v);
      Vertex chosen;
      if (!a_closes && !b_closes) {
        if (a == b) {
          chosen = a;
        } else {
          double wa = crossover_weight(deg_first[a], levels[v], levels[a]);
          double wb = crossover_weight(deg_second[b], levels[v], levels[b]);
          chosen = uniform_real(rng) * (wa + wb) < wa ? a : b;
        }
      } else if (!a_closes) {
        chosen = a;
      } else if (!b_closes) {
        chosen = b;
      } else {
        std::vector<Vertex> options;
        for (Vertex u : g.neighbors(v)) {
          if (comp.find(u) != comp.find(v)) options.push_back(u);
        }
        if (options.empty()) {
          stuck = true;
          break;
        }
        chosen = options[uniform_index(rng, options.size())];
      }
      parent[v] = chosen;
      comp.unite(v, chosen);
    }
    if (!stuck) return AggregationTree(g.sink(), std::move(parent));
  }
  return first;
}

std::int32_t draw_mutation_size(std::int32_t k_max, Rng& rng) {
  double total = 0.0;
  for (std::int32_t k = 0; k <= k_max; ++k) total += 1.0 / (k + 1);
  double x = uniform_real(rng) * total;
  for (std::int32_t k = 0; k < k_max; ++k) {
    x -= 1.0 / (k + 1);
    if (x < 0.0) return k;
  }
  return k_max;
}

AggregationTree mutate_k(const Graph& g, const AggregationTree& t, std::int32_t k, Rng& rng) {
  // arcs (child, parent) of the directed graph, which has no arcs out of the sink
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex i = 0; i < g.n(); ++i) {
    if (i == g.sink()) continue;
    for (Vertex j : g.neighbors(i)) arcs.emplace_back(i, j);
  }
  AggregationTree out = t;
  if (arcs.size() <= static_cast<std::size_t>(g.n() - 1)) return out;  // every arc is a tree arc
  for (std::int32_t step = 0; step < k; ++step) {
    std::pair<Vertex, Vertex> arc;
    do {
      arc = arcs[uniform_index(rng, arcs.size())];
    } while (out.parent(arc.first) == arc.second);
    auto [i, j] = arc;
    if (!is_ancestor_or_self(out, i, j)) out.set_parent(i, j);
  }
  return out;
}

AggregationTree mutate(const Graph& g, const AggregationTree& t, const GlsParams& params, Rng& rng) {
  return mutate_k(g, t, draw_mutation_size(params.resolved_k_max(g.n()), rng), rng);
}

AggregationTree local_search(const Graph& g, AggregationTree t, LocalSearchStats* stats) {
  while (true) {
    ReattachEvaluator eval(t);
    std::int32_t best_effect = 0;
    Vertex best_v = kNoVertex, best_u = kNoVertex;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (v == g.sink()) continue;
      for (Vertex u : g.neighbors(v)) {
        if (u == t.parent(v) || eval.is_descendant(u, v)) continue;
        std::int32_t effect = eval.effect(v, u);
        if (stats) ++stats->evaluations;
        if (effect < best_effect) {
          best_effect = effect;
          best_v = v;
          best_u = u;
        }
      }
    }
    if (best_v == kNoVertex) return t;
    t.set_parent(best_v, best_u);
    if (stats) ++stats->moves;
  }
}

bool is_local_optimum(const Graph& g, const AggregationTree& t) {
  for (Vertex v = 0; v < g.n(); ++v) {
    if (v == g.sink()) continue;
    for (Vertex u : g.neighbors(v)) {
      if (u == t.parent(v) || is_ancestor_or_self(t, v, u)) continue;
      if (reattach_effect_full(g, t, v, u) < 0) return false;
    }
  }
  return true;
}

GlsResult run_gls(const Graph& g, const GlsParams& params, const RunOptions& options) {
  params.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  };

  GlsResult result;
  if (g.n() == 1) {
    result.tree = AggregationTree(g.sink(), {kNoVertex});
    result.schedule = assign_slots(result.tree);
    result.initial_population = 1;
    result.best_history = {0};
    return result;
  }

  const auto levels = bfs_levels(g);
  Rng init_rng(stream_seed(params.seed, 0, kInitStream));
  Population pop = init_population(g, params, init_rng);
  result.initial_population = static_cast<std::int32_t>(pop.members.size());
  result.best_history.push_back(pop.best().latency);

  const auto offspring_count = static_cast<std::size_t>(params.offsp_size);
  std::vector<Member> offspring(offspring_count);
  std::int32_t stalled = 0;
  while (pop.generation < params.max_generations) {
    if (options.time_limit_ms && elapsed_ms() >= *options.time_limit_ms) {
      result.hit_time_limit = true;
      break;
    }
    ++pop.generation;
    const auto gen = static_cast<std::uint64_t>(pop.generation);

    Rng select_rng(stream_seed(params.seed, gen, kSelectStream));
    auto parents = select_parents(pop, 2 * offspring_count, select_rng);
    shuffle(parents.begin(), parents.end(), select_rng);

    auto breed = [&](std::size_t k) {
      Rng rng(stream_seed(params.seed, gen, kOffspringBase + k));
      AggregationTree child = crossover(g, pop.members[parents[2 * k]].tree,
                                        pop.members[parents[2 * k + 1]].tree, levels, rng);
      if (bernoulli(rng, params.p_m)) child = mutate(g, child, params, rng);
      if (bernoulli(rng, params.p_ls)) child = local_search(g, std::move(child));
      std::int32_t lat = latency(child);
      offspring[k] = Member{std::move(child), lat};
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(offspring_count)));
    if (jobs == 1) {
      for (std::size_t k = 0; k < offspring_count; ++k) breed(k);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> workers;
      for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
          for (std::size_t k; (k = next.fetch_add(1)) < offspring_count;) breed(k);
        });
      }
    }

    // elitist join; stable sort keeps current members ahead of offspring on ties
    std::vector<Member> merged = std::move(pop.members);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Member& a, const Member& b) { return a.latency < b.latency; });
    if (merged.size() > static_cast<std::size_t>(params.pop_size)) merged.resize(static_cast<std::size_t>(params.pop_size));
    pop.members = std::move(merged);

    if (options.verify_each_generation) {
      for (const auto& m : pop.members) {
        if (!tree_violations(g, m.tree).empty() || latency(m.tree) != m.latency) {
          throw std::logic_error("population member violates tree invariants");
        }
      }
    }

    auto range = pop.fitness_range();
    stalled = range == pop.history.back() ? stalled + 1 : 0;
    pop.history.push_back(range);
    result.best_history.push_back(pop.best().latency);
    if (stalled >= 10) break;
  }

  // members that skipped local search may still admit an improving move
  result.tree = local_search(g, pop.best().tree);
  result.schedule = assign_slots(result.tree);
  result.latency = result.schedule.latency;
  result.generations = pop.generation;
  result.elapsed_ms = elapsed_ms();
  return result;
}

}  // namespace convergecast
