#include <gtest/gtest.h>

#include "convergecast/graph.hpp"
#include "support.hpp"

using namespace convergecast;

namespace {

std::string error_of(const std::string& text) {
  try {
    read_graph(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Graph, RejectsInvalidEdgeSets) {
  EXPECT_THROW(Graph(3, 0, {{0, 1}, {1, 1}}), Error);
  EXPECT_THROW(Graph(3, 0, {{0, 1}, {1, 0}, {1, 2}}), Error);
  EXPECT_THROW(Graph(3, 0, {{0, 1}, {1, 3}}), Error);
  EXPECT_THROW(Graph(4, 0, {{0, 1}, {2, 3}}), Error);
  EXPECT_THROW(Graph(3, 5, {{0, 1}, {1, 2}}), Error);
  EXPECT_THROW(Graph(0, 0, {}), Error);
  EXPECT_NO_THROW(Graph(1, 0, {}));
}

TEST(Graph, AdjacencyIsSortedAndSymmetric) {
  Graph g(5, 2, {{4, 0}, {0, 1}, {2, 1}, {3, 2}, {0, 3}});
  EXPECT_EQ(g.n(), 5);
  EXPECT_EQ(g.m(), 5);
  EXPECT_EQ(g.sink(), 2);
  std::vector<Vertex> n0(g.neighbors(0).begin(), g.neighbors(0).end());
  EXPECT_EQ(n0, (std::vector<Vertex>{1, 3, 4}));
  EXPECT_EQ(g.degree(2), 2);
  EXPECT_TRUE(g.has_edge(3, 0));
  EXPECT_TRUE(g.has_edge(0, 3));
  EXPECT_FALSE(g.has_edge(4, 1));
  auto edges = g.edges();
  EXPECT_TRUE(std::is_sorted(edges.begin(), edges.end()));
  for (auto [u, v] : edges) EXPECT_LT(u, v);
}

TEST(Graph, WithSinkKeepsEdges) {
  Graph g = gen_cycle(6);
  Graph h = g.with_sink(3);
  EXPECT_EQ(h.sink(), 3);
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_FALSE(g == h);
  EXPECT_THROW(g.with_sink(6), Error);
}

TEST(Graph, LevelsOnPathAndCycle) {
  auto lv = bfs_levels(gen_path(5));
  EXPECT_EQ(lv.level, (std::vector<std::int32_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(lv.eccentricity(), 4);
  EXPECT_EQ(bfs_levels(gen_cycle(7)).eccentricity(), 3);
  EXPECT_EQ(bfs_levels(gen_path(5).with_sink(2)).eccentricity(), 2);
}

TEST(GraphText, RoundTrip) {
  testing_support::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    auto g = testing_support::random_connected(12, 0.3, rng);
    EXPECT_EQ(read_graph(write_graph(g)), g);
  }
}

TEST(GraphText, SkipsCommentsAndBlankLines) {
  Graph g = read_graph("# triangle\n\n3 3 1\n0 1\n# middle\n1 2\n\n0 2\n");
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.m(), 3);
  EXPECT_EQ(g.sink(), 1);
}

TEST(GraphText, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("3 2\n0 1\n1 2\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("3 2 0\n0 1\n1 5\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("3 2 0\n0 1\n1 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("3 3 0\n0 1\n1 2\n2 1\n").find("line 4"), std::string::npos);
  EXPECT_NE(error_of("3 2 0\n0 x\n1 2\n").find("line 2"), std::string::npos);
  EXPECT_FALSE(error_of("3 3 0\n0 1\n1 2\n").empty());
  EXPECT_FALSE(error_of("4 2 0\n0 1\n2 3\n").empty());
  EXPECT_FALSE(error_of("").empty());
}

TEST(GraphText, FileRoundTrip) {
  testing_support::TempDir dir;
  Graph g = gen_shuffle_exchange(4);
  save_graph(g, dir.file("se4.graph"));
  EXPECT_EQ(load_graph(dir.file("se4.graph")), g);
  EXPECT_THROW(load_graph(dir.file("missing.graph")), Error);
}
