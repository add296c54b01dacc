#include <gtest/gtest.h>

#include "netreal/graph.hpp"
#include "netreal/fixtures.hpp"

namespace netreal {
namespace {

TEST(Graph, RiverGraphFromOneBasedListing) {
  // (1,1),(2,1),(2,2),(3,2),(3,3) shifted to 0-based.
  const auto g = build_graph(3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}});
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.edges().size(), 5u);
  EXPECT_EQ(g, fixtures::river_graph());
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_EQ(g.num_non_self_edges(), 2u);
}

TEST(Graph, SingleSelfLoop) {
  const auto g = build_graph(1, {{0, 0}});
  EXPECT_TRUE(g.has_edge(0, 0));
  EXPECT_EQ(g.num_non_self_edges(), 0u);
}

TEST(Graph, SelfLoopsAreNotImplicit) {
  const auto g = build_graph(2, {{1, 0}});
  EXPECT_FALSE(g.has_edge(0, 0));
  EXPECT_FALSE(g.has_edge(1, 1));
}

TEST(Graph, OutOfRangeIndexIsInputError) {
  EXPECT_THROW(build_graph(2, {{0, 2}}), InputError);
  EXPECT_THROW(build_graph(2, {{-1, 0}}), InputError);
  EXPECT_THROW(build_graph(0, {}), InputError);
  EXPECT_THROW((void)fixtures::river_graph().has_edge(3, 0), InputError);
}

TEST(Graph, DuplicatesAreDropped) {
  const auto g = build_graph(2, {{0, 1}, {0, 1}, {1, 1}, {0, 1}});
  EXPECT_EQ(g.edges().size(), 2u);
}

TEST(Graph, Transpose) {
  EXPECT_EQ(transpose(build_graph(2, {{0, 1}})), build_graph(2, {{1, 0}}));
  EXPECT_EQ(transpose(fixtures::river_graph()), build_graph(3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}}));
}

TEST(Graph, TransposeIsAnInvolution) {
  for (Index n = 1; n <= 5; ++n) {
    std::vector<std::pair<Index, Index>> edges;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if ((i * 7 + j * 3 + n) % 4 == 0) edges.emplace_back(i, j);
      }
    }
    const auto g = build_graph(n, edges);
    EXPECT_EQ(transpose(transpose(g)), g);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) EXPECT_EQ(g.has_edge(i, j), transpose(g).has_edge(j, i));
    }
  }
}

TEST(Graph, InNeighborsAscending) {
  const auto g = build_graph(3, {{2, 2}, {2, 0}, {2, 1}, {0, 0}});
  EXPECT_EQ(g.in_neighbors(2), (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(g.in_neighbors(1), (std::vector<Index>{}));
}

TEST(NodeDims, TotalsAndOffsets) {
  const auto dims = NodeDims::from_counts({2, 0, 1}, {1, 2, 1}, {1, 1, 3});
  EXPECT_EQ(dims.n(), 3);
  EXPECT_EQ(dims.m(), 4);
  EXPECT_EQ(dims.p(), 5);
  EXPECT_EQ(dims.state_offset(2), 2);
  EXPECT_EQ(dims.input_offset(2), 3);
  EXPECT_EQ(dims.output_offset(2), 2);
  EXPECT_THROW(NodeDims::from_counts({-1}, {1}, {1}), InputError);
}

}  // namespace
}  // namespace netreal
