#include <gtest/gtest.h>

#include "convergecast/oracles.hpp"
#include "support.hpp"

using namespace convergecast;
using testing_support::random_connected;

namespace {

Graph hypercube(int d) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex w = 0; w < (1 << d); ++w) {
    for (int b = 0; b < d; ++b) {
      Vertex x = w ^ (1 << b);
      if (w < x) e.emplace_back(w, x);
    }
  }
  return Graph(1 << d, 0, e);
}

}  // namespace

TEST(Exact, KnownFamilies) {
  for (Vertex n = 1; n <= 12; ++n) EXPECT_EQ(broadcast_time_exact(gen_complete(n)), ceil_log2(n)) << n;
  for (Vertex n = 1; n <= 16; ++n) EXPECT_EQ(broadcast_time_exact(gen_path(n)), n - 1);
  for (Vertex n = 3; n <= 16; ++n) EXPECT_EQ(broadcast_time_exact(gen_cycle(n)), (n + 1) / 2) << n;
  for (Vertex k = 1; k <= 15; ++k) EXPECT_EQ(broadcast_time_exact(gen_star(k)), k);
  // a leaf of the star must first reach the centre
  EXPECT_EQ(broadcast_time_exact(gen_star(5).with_sink(3)), 5);
  for (int d = 1; d <= 4; ++d) EXPECT_EQ(broadcast_time_exact(hypercube(d)), d);
  EXPECT_EQ(broadcast_time_exact(gen_path(9).with_sink(4)), 5);
}

TEST(Exact, SizeCap) {
  EXPECT_THROW(broadcast_time_exact(gen_path(17)), SizeCapError);
  EXPECT_THROW(best_tree_exhaustive(gen_path(10)), SizeCapError);
}

TEST(Exact, WitnessTreeIsOptimal) {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    Graph g = random_connected(static_cast<Vertex>(1 + uniform_index(rng, 14)), 0.25, rng);
    auto r = broadcast_schedule_exact(g);
    ASSERT_TRUE(tree_violations(g, r.tree).empty());
    ASSERT_EQ(latency(r.tree), r.latency);
    ASSERT_GE(r.latency, lower_bound(g).lb);
  }
}

TEST(Exhaustive, AgreesWithBroadcastSearch) {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    Graph g = random_connected(static_cast<Vertex>(1 + uniform_index(rng, 8)), 0.3, rng);
    auto ex = best_tree_exhaustive(g);
    ASSERT_EQ(ex.latency, broadcast_time_exact(g)) << write_graph(g);
    ASSERT_EQ(latency(ex.tree), ex.latency);
  }
}

TEST(Exhaustive, VisitsEverySpanningTreeOnce) {
  Rng rng(31);
  EXPECT_EQ(best_tree_exhaustive(gen_complete(6)).trees_visited, 1296);  // 6^4
  EXPECT_EQ(best_tree_exhaustive(gen_cycle(7)).trees_visited, 7);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_connected(static_cast<Vertex>(2 + uniform_index(rng, 7)), 0.4, rng);
    ASSERT_EQ(best_tree_exhaustive(g).trees_visited, testing_support::spanning_tree_count(g));
  }
}

TEST(LowerBound, Components) {
  auto b = lower_bound(gen_path(10));
  EXPECT_EQ(b.lb_log, 4);
  EXPECT_EQ(b.lb_ecc, 9);
  EXPECT_EQ(b.lb, 9);
  EXPECT_EQ(lower_bound(gen_butterfly(8)).lb_log, 11);
  auto c = lower_bound(gen_ccc(3));
  EXPECT_GE(c.lb, 5);
  EXPECT_LE(c.lb, 6);
  EXPECT_EQ(lower_bound(gen_complete(1)).lb, 0);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(1025), 11);
}
