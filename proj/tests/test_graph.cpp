#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rumor/edge_list.hpp"
#include "rumor/generators.hpp"
#include "rumor/graph.hpp"
#include "rumor/node_set.hpp"
#include "rumor/random.hpp"

using namespace rumor;

namespace {

NodeSet random_subset(std::size_t n, double fraction, std::uint64_t key) {
  CounterStream rng(key);
  NodeSet s(n);
  for (node_id v = 0; v < n; ++v)
    if (rng.bernoulli(fraction)) s.insert(v);
  return s;
}

// All-pairs BFS, written separately from the bit-parallel routine.
std::optional<std::uint64_t> naive_diameter(const Graph& g) {
  std::uint64_t best = 0;
  for (node_id v = 0; v < g.n(); ++v) {
    for (auto d : bfs_distances(g, v)) {
      if (d == kUnreachable) return std::nullopt;
      best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(d));
    }
  }
  return best;
}

}  // namespace

TEST(NodeSet, MembershipAndAlgebra) {
  auto a = NodeSet::of(10, {1, 3, 5});
  auto b = NodeSet::of(10, {3, 4});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(3));
  EXPECT_FALSE(a.contains(4));
  EXPECT_EQ((a | b).size(), 4u);
  EXPECT_EQ((a & b).members(), std::vector<node_id>{3});
  EXPECT_EQ((a - b).members(), (std::vector<node_id>{1, 5}));
  EXPECT_EQ(a.complement().size(), 7u);
  EXPECT_TRUE(a.intersects(b));
  EXPECT_FALSE(a.insert(1));
  EXPECT_TRUE(a.erase(1));
  EXPECT_EQ(a.size(), 2u);
  EXPECT_THROW(NodeSet::of(4, {4}), InvalidArgument);
}

TEST(NodeSet, ComplementKeepsTailBitsClear) {
  NodeSet s(70);
  const auto c = s.complement();
  EXPECT_EQ(c.size(), 70u);
  EXPECT_EQ(c.complement().size(), 0u);
}

TEST(Graph, FromEdgesCollapsesDuplicatesAndOrientations) {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}, {1, 2}};
  const auto g = Graph::from_edges(3, edges);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_TRUE(g.has_edge(2, 1));
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph::from_edges(3, loop), InvalidArgument);
  const std::vector<Edge> far{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, far), InvalidArgument);
  EXPECT_THROW(Graph::from_adjacency({{1}, {}}), InvalidArgument);
  EXPECT_THROW(Graph::from_adjacency({{1, 1}, {0}}), InvalidArgument);
  EXPECT_THROW(Graph::from_adjacency({{0}}), InvalidArgument);
  EXPECT_NO_THROW(Graph::from_adjacency({{1}, {0}}));
}

TEST(Generators, Complete) {
  EXPECT_EQ(generate_complete(2).edges(), (std::vector<Edge>{{0, 1}}));
  const auto k5 = generate_complete(5);
  EXPECT_EQ(k5.edge_count(), 10u);
  for (node_id v = 0; v < 5; ++v) EXPECT_EQ(k5.degree(v), 4u);
  const auto k1 = generate_complete(1);
  EXPECT_EQ(k1.n(), 1u);
  EXPECT_EQ(k1.edge_count(), 0u);
  EXPECT_THROW(generate_complete(0), InvalidArgument);
  EXPECT_TRUE(k5.is_complete());
  EXPECT_EQ(k5, Graph::from_edges(5, generate_complete(5).edges()));
}

TEST(Generators, ErdosRenyiForcedCases) {
  EXPECT_EQ(generate_er(4, 0.0, 1).edge_count(), 0u);
  EXPECT_EQ(generate_er(4, 1.0, 1), generate_complete(4));
  EXPECT_THROW(generate_er(4, 1.5, 1), InvalidArgument);
  EXPECT_THROW(generate_er(4, -0.1, 1), InvalidArgument);
}

TEST(Generators, ErdosRenyiSeededAndEdgeCountWithinFiveSigma) {
  EXPECT_EQ(generate_er(300, 0.05, 7), generate_er(300, 0.05, 7));
  EXPECT_NE(generate_er(300, 0.05, 7), generate_er(300, 0.05, 8));
  const double pairs = 1000.0 * 999.0 / 2.0;
  const double mean = 0.01 * pairs;
  const double sd = std::sqrt(0.01 * 0.99 * pairs);
  for (std::uint64_t seed : std::initializer_list<std::uint64_t>{1, 2, 3, kDefaultSeed}) {
    const auto g = generate_er(1000, 0.01, seed);
    EXPECT_LE(std::abs(static_cast<double>(g.edge_count()) - mean), 5 * sd) << "seed " << seed;
  }
}

TEST(Generators, ErdosRenyiPairsAreUniform) {
  // Each of the 6 pairs of K_4 should appear with frequency p.
  std::array<int, 6> hits{};
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const auto g = generate_er(4, 0.3, static_cast<std::uint64_t>(r));
    int idx = 0;
    for (node_id u = 0; u < 4; ++u)
      for (node_id v = u + 1; v < 4; ++v, ++idx)
        if (g.has_edge(u, v)) ++hits[idx];
  }
  const double sd = std::sqrt(0.3 * 0.7 / reps);
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / reps, 0.3, 5 * sd);
}

TEST(Generators, DisjointCliques) {
  const auto g4 = generate_disjoint_cliques(4);
  EXPECT_EQ(g4.edges(), (std::vector<Edge>{{0, 1}, {2, 3}}));
  const auto g12 = generate_disjoint_cliques(12);
  for (node_id v = 0; v < 12; ++v) EXPECT_EQ(g12.degree(v), 5u);
  EXPECT_FALSE(is_connected(g12));
  EXPECT_EQ(generate_disjoint_cliques(2).edge_count(), 0u);
  EXPECT_THROW(generate_disjoint_cliques(5), InvalidArgument);
  EXPECT_THROW(generate_disjoint_cliques(0), InvalidArgument);
}

TEST(Generators, Barbell) {
  const auto g = generate_barbell(4, 2);
  EXPECT_EQ(g.n(), 10u);
  EXPECT_EQ(g.edge_count(), 6u + 6u + 3u);
  EXPECT_TRUE(is_connected(g));
  EXPECT_EQ(diameter(g), 5u);
}

TEST(EdgeList, ParsesExamples) {
  const auto path = parse_edge_list("n 3\n0 1\n1 2");
  EXPECT_EQ(path, generate_path(3));
  const auto single = parse_edge_list("n 2\n0 1\n1 0");
  EXPECT_EQ(single.edge_count(), 1u);
  const auto crlf = parse_edge_list("# comment\r\nn 4\r\n\r\n0 1\r\n");
  EXPECT_EQ(crlf.n(), 4u);
  EXPECT_EQ(crlf.degree(3), 0u);
  EXPECT_EQ(parse_edge_list("2 5\n").n(), 6u);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  const auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("n 2\n0 0"), 2u);
  EXPECT_EQ(line_of("n 2\n0 1\n0 x"), 3u);
  EXPECT_EQ(line_of("n 2\n# c\n0 2"), 3u);
  EXPECT_EQ(line_of("0 1\nn 2"), 2u);
  EXPECT_EQ(line_of("n 2\nn 2"), 2u);
  EXPECT_EQ(line_of("n 3\n0 1 2"), 2u);
  EXPECT_THROW(parse_edge_list(""), ParseError);
}

TEST(EdgeList, RoundTripIsIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_er(40, 0.1, seed);
    EXPECT_EQ(parse_edge_list(to_edge_list(g)), g);
  }
  const auto isolated = Graph::from_edges(5, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(parse_edge_list(to_edge_list(isolated)), isolated);
}

TEST(Structure, NeighborhoodAndBoundaryExamples) {
  const auto star = generate_star(5);
  EXPECT_EQ(neighborhood(star, NodeSet::of(5, {0})).members(), (std::vector<node_id>{1, 2, 3, 4}));
  const auto k4 = generate_complete(4);
  EXPECT_EQ(neighborhood(k4, NodeSet::of(4, {0, 1})).size(), 4u);
  EXPECT_EQ(boundary(k4, NodeSet::of(4, {0, 1})).members(), (std::vector<node_id>{2, 3}));
  EXPECT_TRUE(neighborhood(k4, NodeSet(4)).empty());
  const auto two_triangles = generate_disjoint_cliques(6);
  EXPECT_TRUE(boundary(two_triangles, NodeSet::of(6, {0, 1, 2})).empty());
  EXPECT_EQ(boundary(generate_path(4), NodeSet::of(4, {1, 2})).members(), (std::vector<node_id>{0, 3}));
}

TEST(Structure, LayersDiameterMinDegreeExamples) {
  EXPECT_EQ(bfs_layers(generate_path(4), 0), (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(bfs_layers(generate_complete(5), 3), (std::vector<std::size_t>{1, 5}));
  EXPECT_EQ(bfs_layers(generate_disjoint_cliques(6), 4), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(diameter(generate_complete(5)), 1u);
  EXPECT_EQ(diameter(generate_path(4)), 3u);
  EXPECT_EQ(diameter(generate_disjoint_cliques(6)), std::nullopt);
  EXPECT_EQ(diameter(generate_complete(1)), 0u);
  EXPECT_EQ(min_degree(generate_complete(6)), 5u);
  EXPECT_EQ(min_degree(generate_star(5)), 1u);
  EXPECT_EQ(min_degree(Graph::from_edges(3, std::vector<Edge>{{0, 1}})), 0u);
}

TEST(StructureProperties, BoundaryNeighborhoodIdentities) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = generate_er(60, 0.08, seed);
    const auto s = random_subset(60, 0.2, seed + 1000);
    const auto bd = boundary(g, s);
    const auto nb = neighborhood(g, s);
    EXPECT_FALSE(bd.intersects(s));
    EXPECT_TRUE((bd - nb).empty());
    EXPECT_EQ(inclusive_neighborhood(g, s).size(), s.size() + bd.size());
  }
}

TEST(StructureProperties, LayerRecursionAndDiameterAgreement) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = generate_er(70, 0.04 + 0.002 * static_cast<double>(seed), seed);
    const auto layers = bfs_layers(g, 0);
    NodeSet ball = NodeSet::of(g.n(), {0});
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
      EXPECT_LE(layers[i], layers[i + 1]);
      ASSERT_EQ(ball.size(), layers[i]);
      ball = inclusive_neighborhood(g, ball);
    }
    bool saturates_below_n = false;
    for (node_id v = 0; v < g.n(); ++v) saturates_below_n |= bfs_layers(g, v).back() < g.n();
    const auto d = diameter(g);
    EXPECT_EQ(!d.has_value(), saturates_below_n);
    EXPECT_EQ(d, naive_diameter(g));
    if (d) {
      const auto lb = diameter_lower_bound(g, 4, seed);
      ASSERT_TRUE(lb.has_value());
      EXPECT_LE(*lb, *d);
    }
  }
}

TEST(StructureProperties, DiameterBatchesBeyondSixtyFourSources) {
  for (std::size_t n : {63u, 64u, 65u, 130u}) {
    EXPECT_EQ(diameter(generate_cycle(n)), n / 2);
    EXPECT_EQ(diameter(generate_path(n)), n - 1);
  }
}
