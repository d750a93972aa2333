#include <gtest/gtest.h>

#include "convergecast/gls.hpp"
#include "convergecast/tree.hpp"
#include "support.hpp"

using namespace convergecast;
using testing_support::random_connected;
using testing_support::random_tree;
using testing_support::tree_latency_oracle;

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& word) {
  for (const auto& p : problems) {
    if (p.find(word) != std::string::npos) return true;
  }
  return false;
}

AggregationTree star_tree(Vertex leaves) {
  std::vector<Vertex> parent(static_cast<std::size_t>(leaves) + 1, 0);
  parent[0] = kNoVertex;
  return AggregationTree(0, parent);
}

}  // namespace

TEST(Latency, SmallShapes) {
  EXPECT_EQ(latency(AggregationTree(0, {kNoVertex})), 0);
  EXPECT_EQ(latency(star_tree(6)), 6);
  EXPECT_EQ(latency(AggregationTree(0, {kNoVertex, 0, 1, 2, 3})), 4);
  // binomial tree of order 3
  EXPECT_EQ(latency(AggregationTree(0, {kNoVertex, 0, 0, 2, 0, 4, 4, 6})), 3);
  // sink with two 2-vertex chains and one leaf: ranks {1,1,0} -> max(1+1, 1+2, 0+3) = 3
  EXPECT_EQ(latency(AggregationTree(0, {kNoVertex, 0, 1, 0, 3, 0})), 3);
  // three 3-vertex chains: ranks {2,2,2} -> 2+3 = 5
  EXPECT_EQ(latency(AggregationTree(0, {kNoVertex, 0, 1, 0, 3, 0, 5, 2, 4, 6})), 5);
}

TEST(Latency, MatchesBroadcastOnTheTree) {
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    auto n = static_cast<Vertex>(2 + uniform_index(rng, 13));
    auto t = random_tree(n, static_cast<Vertex>(uniform_index(rng, static_cast<std::uint64_t>(n))), rng);
    ASSERT_EQ(latency(t), tree_latency_oracle(t)) << i;
  }
}

TEST(Latency, RanksRecurse) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto t = random_tree(40, 0, rng);
    auto r = subtree_ranks(t);
    auto ch = t.children();
    for (Vertex v = 0; v < t.n(); ++v) {
      std::vector<std::int32_t> cr;
      for (Vertex c : ch[v]) cr.push_back(r[c]);
      std::sort(cr.rbegin(), cr.rend());
      std::int32_t expect = 0;
      for (std::size_t k = 0; k < cr.size(); ++k) expect = std::max(expect, cr[k] + static_cast<std::int32_t>(k) + 1);
      ASSERT_EQ(r[v], expect);
    }
  }
}

TEST(Schedule, AssignedSlotsAreFeasibleAndTight) {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 40)), 0.1, rng);
    auto t = random_min_degree_tree(g, rng);
    ASSERT_TRUE(tree_violations(g, t).empty());
    auto s = assign_slots(t);
    EXPECT_EQ(s.latency, latency(t));
    EXPECT_EQ(s.slot[g.sink()], 0);
    auto problems = check_schedule(g, t, s);
    ASSERT_TRUE(problems.empty()) << problems.front();
    std::int32_t top = 0;
    for (auto x : s.slot) top = std::max(top, x);
    EXPECT_EQ(top, s.latency);
  }
}

TEST(Schedule, LatestFirstOrderAndTieBreak) {
  // sink 0 with children 1 (chain of 2) and 2, 3 leaves
  AggregationTree t(0, {kNoVertex, 0, 0, 0, 1});
  auto s = assign_slots(t);
  EXPECT_EQ(s.latency, 3);
  EXPECT_EQ(s.slot[1], 3);
  EXPECT_EQ(s.slot[2], 2);
  EXPECT_EQ(s.slot[3], 1);
  EXPECT_EQ(s.slot[4], 2);
}

TEST(Schedule, CheckerNamesEachViolation) {
  Graph g = gen_star(3);
  auto t = star_tree(3);
  auto good = assign_slots(t);
  ASSERT_TRUE(check_schedule(g, t, good).empty());

  auto clash = good;
  clash.slot[2] = clash.slot[1];
  EXPECT_TRUE(mentions(check_schedule(g, t, clash), "sibling"));

  auto zero = good;
  zero.slot[3] = 0;
  EXPECT_FALSE(check_schedule(g, t, zero).empty());

  auto lie = good;
  lie.latency = 2;
  EXPECT_FALSE(check_schedule(g, t, lie).empty());

  Graph p = gen_path(3);
  AggregationTree chain(0, {kNoVertex, 0, 1});
  Schedule late{{0, 1, 2}, 2};
  EXPECT_FALSE(check_schedule(p, chain, late).empty());
  EXPECT_TRUE(check_schedule(p, chain, Schedule{{0, 2, 1}, 2}).empty());
}

TEST(Tree, ViolationsDetected) {
  Graph g = gen_cycle(5);
  EXPECT_TRUE(tree_violations(g, AggregationTree(0, {kNoVertex, 0, 1, 4, 0})).empty());
  EXPECT_FALSE(tree_violations(g, AggregationTree(0, {kNoVertex, 2, 1, 4, 0})).empty());
  EXPECT_FALSE(tree_violations(g, AggregationTree(0, {kNoVertex, 0, 0, 4, 0})).empty());
  EXPECT_FALSE(tree_violations(g, AggregationTree(0, {kNoVertex, 0, kNoVertex, 4, 0})).empty());
  EXPECT_FALSE(tree_violations(g, AggregationTree(1, {kNoVertex, 0, 1, 4, 0})).empty());
  EXPECT_FALSE(tree_violations(g, AggregationTree(0, {kNoVertex, 0, 1, 4})).empty());
}

TEST(Tree, DegreesDepthsHamming) {
  AggregationTree t(0, {kNoVertex, 0, 0, 1, 1});
  EXPECT_EQ(t.degrees(), (std::vector<std::int32_t>{2, 3, 1, 1, 1}));
  EXPECT_EQ(t.depths(), (std::vector<std::int32_t>{0, 1, 1, 2, 2}));
  EXPECT_EQ(t.depth(), 2);
  AggregationTree u(0, {kNoVertex, 0, 0, 2, 1});
  EXPECT_EQ(hamming(t, u), 1);
  EXPECT_EQ(t.children()[1], (std::vector<Vertex>{3, 4}));
}

TEST(Reattach, IncrementalMatchesRecomputation) {
  Rng rng(2024);
  int checked = 0;
  while (checked < 10000) {
    Graph g = random_connected(static_cast<Vertex>(3 + uniform_index(rng, 28)), 0.15, rng);
    auto t = random_min_degree_tree(g, rng);
    ReattachEvaluator eval(t);
    ASSERT_EQ(eval.latency(), latency(t));
    for (int k = 0; k < 20; ++k) {
      auto v = static_cast<Vertex>(uniform_index(rng, static_cast<std::uint64_t>(g.n())));
      if (v == g.sink()) continue;
      auto nb = g.neighbors(v);
      Vertex u = nb[uniform_index(rng, nb.size())];
      if (eval.is_descendant(u, v)) {
        EXPECT_THROW(reattach_effect(g, t, v, u), Error);
        continue;
      }
      ASSERT_EQ(reattach_effect(g, t, v, u), reattach_effect_full(g, t, v, u));
      ++checked;
    }
  }
}

TEST(Reattach, RejectsIllegalMoves) {
  Graph g = gen_cycle(5);
  AggregationTree t(0, {kNoVertex, 0, 1, 4, 0});
  EXPECT_THROW(apply_reattach(g, t, 1, 2), Error);  // 2 is below 1
  EXPECT_THROW(apply_reattach(g, t, 1, 3), Error);  // not an edge
  EXPECT_THROW(apply_reattach(g, t, 0, 1), Error);  // sink
  auto moved = apply_reattach(g, t, 2, 3);
  EXPECT_EQ(moved.parent(2), 3);
  EXPECT_TRUE(tree_violations(g, moved).empty());
  EXPECT_EQ(reattach_effect(g, t, 2, 1), 0);
}

TEST(ScheduleText, RoundTrip) {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Graph g = random_connected(20, 0.2, rng);
    auto t = random_min_degree_tree(g, rng);
    auto s = assign_slots(t);
    auto back = read_schedule(write_schedule(t, s));
    EXPECT_EQ(back.tree, t);
    EXPECT_EQ(back.schedule, s);
  }
}

TEST(ScheduleText, ErrorsCarryLineNumbers) {
  auto err = [](const std::string& text) -> std::string {
    try {
      read_schedule(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(err("").find("line 1"), std::string::npos);
  EXPECT_NE(err("3 0 2\n1 0 2\n1 0 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(err("3 0 2\n1 0 2\n0 1 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(err("3 0 2\n1 0 2\n2 7 1\n").find("line 3"), std::string::npos);
  EXPECT_FALSE(err("3 0 2\n1 0 2\n").empty());
}
