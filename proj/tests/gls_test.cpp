#include <gtest/gtest.h>

#include <map>

#include "convergecast/gls.hpp"
#include "support.hpp"

using namespace convergecast;
using testing_support::random_connected;

TEST(GlsParams, Validation) {
  GlsParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.resolved_k_max(31), 10);
  p.k_max = 4;
  EXPECT_EQ(p.resolved_k_max(31), 4);
  auto bad = [](auto edit) {
    GlsParams q;
    edit(q);
    return q;
  };
  EXPECT_THROW(bad([](GlsParams& q) { q.pop_size = 1; }).validate(), Error);
  EXPECT_THROW(bad([](GlsParams& q) { q.offsp_size = 0; }).validate(), Error);
  EXPECT_THROW(bad([](GlsParams& q) { q.p_m = 1.5; }).validate(), Error);
  EXPECT_THROW(bad([](GlsParams& q) { q.sp_proportion = -0.1; }).validate(), Error);
  EXPECT_THROW(bad([](GlsParams& q) { q.k_max = -1; }).validate(), Error);
}

TEST(Fitness, LowerLatencyIsFitter) {
  EXPECT_GT(Fitness{3}, Fitness{4});
  EXPECT_EQ(Fitness{5}, Fitness{5});
}

TEST(InitialTrees, ShortestPathTrees) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 40)), 0.1, rng);
    auto lv = bfs_levels(g);
    for (const auto& t : {spt_tree(g), random_shortest_path_tree(g, lv, rng)}) {
      ASSERT_TRUE(tree_violations(g, t).empty());
      auto d = t.depths();
      for (Vertex v = 0; v < g.n(); ++v) ASSERT_EQ(d[v], lv[v]);
    }
    auto s = spt_tree(g);
    for (Vertex v = 0; v < g.n(); ++v) {
      if (v == g.sink()) continue;
      for (Vertex u : g.neighbors(v)) {
        if (lv[u] + 1 == lv[v]) {
          EXPECT_EQ(s.parent(v), u);
          break;
        }
      }
    }
  }
}

TEST(InitialTrees, MinDegreeTreesAreSpanning) {
  Rng rng(2);
  double star_degree = 0;
  for (int i = 0; i < 200; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 30)), 0.3, rng);
    ASSERT_TRUE(tree_violations(g, random_min_degree_tree(g, rng)).empty());
  }
  // on a complete graph the degree bias keeps the sink well below n - 1 children
  Graph k = gen_complete(30);
  for (int i = 0; i < 50; ++i) star_degree += random_min_degree_tree(k, rng).degrees()[0];
  EXPECT_LT(star_degree / 50, 8.0);
}

TEST(Population, StartsWithShortestPathTreeAndHasNoClones) {
  Rng rng(3);
  Graph g = gen_ccc(4);
  auto pop = init_population(g, GlsParams{}, rng);
  ASSERT_FALSE(pop.members.empty());
  EXPECT_LE(pop.members.size(), 50u);
  EXPECT_EQ(pop.members[0].tree, spt_tree(g));
  std::set<std::vector<Vertex>> distinct;
  for (const auto& m : pop.members) {
    EXPECT_TRUE(tree_violations(g, m.tree).empty());
    EXPECT_EQ(m.latency, latency(m.tree));
    distinct.insert(m.tree.parents());
  }
  EXPECT_EQ(distinct.size(), pop.members.size());
  EXPECT_EQ(pop.history.size(), 1u);
}

TEST(Population, UniqueTreeGraphYieldsOneMember) {
  Rng rng(4);
  auto pop = init_population(gen_path(8), GlsParams{}, rng);
  EXPECT_EQ(pop.members.size(), 1u);
}

TEST(Selection, ProportionalToInverseLatency) {
  Population p;
  std::vector<std::int32_t> lat{2, 3, 6};
  for (auto l : lat) p.members.push_back(Member{AggregationTree(0, {kNoVertex}), l});
  Rng rng(5);
  const std::size_t draws = 300000;
  std::vector<double> hits(3, 0);
  for (auto i : select_parents(p, draws, rng)) hits[i] += 1;
  // weights 1/2 : 1/3 : 1/6
  EXPECT_NEAR(hits[0] / draws, 0.5, 0.005);
  EXPECT_NEAR(hits[1] / draws, 1.0 / 3, 0.005);
  EXPECT_NEAR(hits[2] / draws, 1.0 / 6, 0.005);
  EXPECT_THROW(select_parents(Population{}, 1, rng), Error);
}

TEST(Crossover, WeightFormula) {
  EXPECT_DOUBLE_EQ(crossover_weight(2, 3, 2), 0.5 + 1.0);
  EXPECT_DOUBLE_EQ(crossover_weight(4, 3, 3), 0.25 + 0.5);
  EXPECT_DOUBLE_EQ(crossover_weight(1, 2, 3), 1.0 + 1.0 / 3);
}

TEST(Crossover, ChildIsSpanningAndInherits) {
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 30)), 0.2, rng);
    auto lv = bfs_levels(g);
    auto a = random_min_degree_tree(g, rng);
    auto b = random_shortest_path_tree(g, lv, rng);
    auto c = crossover(g, a, b, lv, rng);
    ASSERT_TRUE(tree_violations(g, c).empty());
    EXPECT_EQ(crossover(g, a, a, lv, rng), a);
    int inherited = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (v != g.sink() && (c.parent(v) == a.parent(v) || c.parent(v) == b.parent(v))) ++inherited;
    }
    EXPECT_GE(inherited * 2, g.n() - 1);
  }
}

TEST(Mutation, SizeDistribution) {
  Rng rng(7);
  const int k_max = 4, draws = 200000;
  std::vector<double> hits(k_max + 1, 0);
  for (int i = 0; i < draws; ++i) hits[draw_mutation_size(k_max, rng)] += 1;
  double h = 1 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5;
  for (int k = 0; k <= k_max; ++k) EXPECT_NEAR(hits[k] / draws, 1.0 / (k + 1) / h, 0.005) << k;
  EXPECT_EQ(draw_mutation_size(0, rng), 0);
}

TEST(Mutation, ChangesAtMostKLinks) {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 30)), 0.2, rng);
    auto t = random_min_degree_tree(g, rng);
    auto k = static_cast<std::int32_t>(uniform_index(rng, 6));
    auto m = mutate_k(g, t, k, rng);
    ASSERT_TRUE(tree_violations(g, m).empty());
    EXPECT_LE(hamming(t, m), k);
  }
  Graph p = gen_path(6);
  EXPECT_EQ(mutate_k(p, spt_tree(p), 5, rng), spt_tree(p));
}

TEST(LocalSearch, ReachesFixedPointWithoutWorsening) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 25)), 0.2, rng);
    auto t = random_min_degree_tree(g, rng);
    LocalSearchStats stats;
    auto r = local_search(g, t, &stats);
    ASSERT_TRUE(tree_violations(g, r).empty());
    EXPECT_LE(latency(r), latency(t) - stats.moves);
    EXPECT_TRUE(is_local_optimum(g, r));
  }
  Graph s = gen_star(4);
  EXPECT_FALSE(is_local_optimum(gen_complete(5), AggregationTree(0, {kNoVertex, 0, 0, 0, 0})));
  EXPECT_TRUE(is_local_optimum(s, spt_tree(s)));
}

TEST(RunGls, ForcedAndTrivialInstances) {
  EXPECT_EQ(run_gls(gen_star(7), GlsParams{}).latency, 7);
  EXPECT_EQ(run_gls(gen_path(9), GlsParams{}).latency, 8);
  auto one = run_gls(gen_complete(1), GlsParams{});
  EXPECT_EQ(one.latency, 0);
  EXPECT_EQ(run_gls(gen_complete(2), GlsParams{}).latency, 1);
}

TEST(RunGls, ResultIsConsistent) {
  Graph g = gen_shuffle_exchange(5);
  RunOptions opt;
  opt.verify_each_generation = true;
  auto r = run_gls(g, GlsParams{}, opt);
  EXPECT_TRUE(check_schedule(g, r.tree, r.schedule).empty());
  EXPECT_EQ(r.latency, latency(r.tree));
  EXPECT_GE(r.latency, lower_bound(g).lb);
  EXPECT_FALSE(r.best_history.empty());
  EXPECT_TRUE(std::is_sorted(r.best_history.rbegin(), r.best_history.rend()));
  EXPECT_LE(r.latency, r.best_history.back());
  EXPECT_LE(r.generations, 1000);
  EXPECT_TRUE(is_local_optimum(g, r.tree));
}

TEST(RunGls, SeedAndThreadCountDeterminism) {
  Graph g = gen_pure_random(40, 0.1, 3);
  GlsParams p;
  p.seed = 42;
  auto a = run_gls(g, p);
  RunOptions four;
  four.jobs = 4;
  auto b = run_gls(g, p, four);
  EXPECT_EQ(a.tree, b.tree);
  EXPECT_EQ(a.generations, b.generations);
  EXPECT_EQ(a.best_history, b.best_history);
  EXPECT_EQ(write_schedule(a.tree, a.schedule), write_schedule(b.tree, b.schedule));
}

TEST(RunGls, GenerationCapAndTimeLimit) {
  Graph g = gen_butterfly(5);
  GlsParams p;
  p.max_generations = 2;
  EXPECT_LE(run_gls(g, p).generations, 2);
  p.max_generations = 1000;
  RunOptions opt;
  opt.time_limit_ms = 0;
  auto r = run_gls(g, p, opt);
  EXPECT_TRUE(r.hit_time_limit);
  EXPECT_TRUE(check_schedule(g, r.tree, r.schedule).empty());
}
