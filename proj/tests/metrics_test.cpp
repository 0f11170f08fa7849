#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gve/metrics.hpp"

namespace gve {
namespace {

// Community totals after moving i to c, recomputed from scratch.
double moved_modularity(const CsrGraph& g, Membership memb, VertexId i, VertexId c) {
  memb[i] = c;
  return modularity(g, memb);
}

// Feeds delta_modularity from community_weights using the stored conventions.
double predicted_delta(const CsrGraph& g, const Membership& memb, VertexId i, VertexId c) {
  auto cw = community_weights(g, memb);
  Weight to_c = 0, to_d = 0;
  auto nbrs = g.neighbors(i);
  auto wts = g.edge_weights(i);
  for (std::size_t e = 0; e < nbrs.size(); ++e) {
    if (nbrs[e] == i) continue;
    if (memb[nbrs[e]] == c) to_c += wts[e];
    if (memb[nbrs[e]] == memb[i]) to_d += wts[e];
  }
  return delta_modularity(g.total_weight(), weighted_degree(g, i), to_c, to_d, cw.big_sigma[c],
                          cw.big_sigma[memb[i]]);
}


TEST(Modularity, TriangleOneCommunity) {
  auto g = test::triangle();
  Membership one{0, 0, 0};
  EXPECT_NEAR(modularity(g, one), 0.0, 1e-15);
  EXPECT_NEAR(modularity_edge_form(g, one), 0.0, 1e-15);
}

TEST(Modularity, TriangleSingletons) {
  auto g = test::triangle();
  Membership singles{0, 1, 2};
  EXPECT_NEAR(modularity(g, singles), -1.0 / 3, 1e-15);
  EXPECT_NEAR(modularity_edge_form(g, singles), -1.0 / 3, 1e-15);
}

TEST(Modularity, BarbellHalves) {
  auto g = test::barbell();
  Membership halves{0, 0, 0, 1, 1, 1};
  EXPECT_NEAR(modularity(g, halves), 5.0 / 14, 1e-15);
  EXPECT_NEAR(modularity_edge_form(g, halves), 5.0 / 14, 1e-15);
}

TEST(Modularity, SelfLoopVertexAlone) {
  auto g = test::graph_from(1, {{0, 0, 4.0}});
  EXPECT_NEAR(modularity(g, Membership{0}), 0.0, 1e-15);
  EXPECT_NEAR(modularity_edge_form(g, Membership{0}), 0.0, 1e-15);
}

TEST(Modularity, UndefinedWithoutEdges) {
  auto g = test::graph_from(3, {});
  EXPECT_THROW(modularity(g, Membership{0, 1, 2}), UndefinedModularity);
  EXPECT_THROW(modularity_edge_form(g, Membership{0, 1, 2}), UndefinedModularity);
  EXPECT_THROW(delta_modularity(0, 1, 0, 0, 0, 0), UndefinedModularity);
}

TEST(Modularity, RejectsBadMembership) {
  auto g = test::triangle();
  EXPECT_THROW(modularity(g, Membership{0, 0}), std::invalid_argument);
  EXPECT_THROW(modularity(g, Membership{0, 0, 3}), std::invalid_argument);
}


TEST(DeltaModularity, StayingPutIsZero) {
  // Target total without i equals the current total minus K_i.
  EXPECT_EQ(delta_modularity(7, 3, 2, 2, 7 - 3, 7), 0.0);
  EXPECT_EQ(delta_modularity(10, 0, 0, 0, 0, 0), 0.0);
}

TEST(DeltaModularity, BarbellVertexTwoAcrossBridge) {
  // Q({0,1},{2,3,4,5}) - Q({0,1,2},{3,4,5}) = 24/196 - 70/196 = -23/98.
  auto g = test::barbell();
  Membership halves{0, 0, 0, 1, 1, 1};
  double dq = delta_modularity(7, 3, 1, 2, 7, 7);
  EXPECT_NEAR(dq, -23.0 / 98, 1e-15);
  EXPECT_NEAR(moved_modularity(g, halves, 2, 1) - modularity(g, halves), -23.0 / 98, 1e-15);
  EXPECT_NEAR(predicted_delta(g, halves, 2, 1), dq, 1e-15);
}

TEST(DeltaModularity, SelfLoopDoesNotChangeMoveGain) {
  auto g = test::graph_from(4, {{0, 0, 3}, {0, 1, 2}, {1, 2, 1}, {2, 3, 4}, {0, 3, 1}});
  Membership memb{0, 0, 2, 2};
  for (VertexId c : {1u, 2u}) {
    double truth = moved_modularity(g, memb, 0, c) - modularity(g, memb);
    EXPECT_NEAR(predicted_delta(g, memb, 0, c), truth, 1e-12) << "target " << c;
  }
}


TEST(CommunityWeights, Examples) {
  auto t = test::triangle();
  auto cw = community_weights(t, Membership{0, 0, 0});
  EXPECT_EQ(cw.sigma[0], 6.0);
  EXPECT_EQ(cw.big_sigma[0], 6.0);

  auto b = test::barbell();
  cw = community_weights(b, Membership{0, 0, 0, 1, 1, 1});
  EXPECT_EQ(cw.sigma[0], 6.0);
  EXPECT_EQ(cw.sigma[1], 6.0);
  EXPECT_EQ(cw.big_sigma[0], 7.0);
  EXPECT_EQ(cw.big_sigma[1], 7.0);

  cw = community_weights(b, Membership{0, 1, 2, 3, 4, 5});
  for (auto s : cw.sigma) EXPECT_EQ(s, 0.0);
}


TEST(CountCommunities, Examples) {
  EXPECT_EQ(count_communities(Membership{1, 1, 0, 2, 0}), 3u);
  EXPECT_EQ(count_communities(Membership(5, 0)), 1u);
  EXPECT_EQ(count_communities(Membership{}), 0u);
}


class ModularityProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ModularityProperties, TwoFormsAgreeAndStayInRange) {
  std::mt19937_64 rng(GetParam());
  VertexId n = 2 + rng() % 40;
  auto g = test::random_graph(n, 0.2, GetParam(), 7, 0.1);
  if (!(g.total_weight() > 0)) GTEST_SKIP();
  for (int k = 0; k < 5; ++k) {
    auto memb = test::random_membership(n, 1 + rng() % n, rng);
    double q = modularity(g, memb);
    EXPECT_NEAR(q, modularity_edge_form(g, memb), 1e-10);
    EXPECT_GE(q, -0.5);
    EXPECT_LE(q, 1.0);
  }
}

TEST_P(ModularityProperties, DeltaMatchesRecomputation) {
  std::mt19937_64 rng(GetParam() + 1000);
  VertexId n = 2 + rng() % 30;
  auto g = test::random_graph(n, 0.25, GetParam() + 1000, 7, 0.2);
  if (!(g.total_weight() > 0)) GTEST_SKIP();
  auto memb = test::random_membership(n, 1 + rng() % n, rng);
  for (int k = 0; k < 10; ++k) {
    VertexId i = rng() % n, c = rng() % n;
    if (c == memb[i]) continue;
    double truth = moved_modularity(g, memb, i, c) - modularity(g, memb);
    EXPECT_NEAR(predicted_delta(g, memb, i, c), truth, 1e-10);
  }
}

TEST_P(ModularityProperties, BigSigmaConservesTotalWeight) {
  std::mt19937_64 rng(GetParam() + 2000);
  auto g = test::random_graph(30, 0.2, GetParam() + 2000, 9, 0.3);
  auto cw = community_weights(g, test::random_membership(30, 5, rng));
  double sum = 0;
  for (std::size_t c = 0; c < cw.sigma.size(); ++c) {
    sum += cw.big_sigma[c];
    EXPECT_LE(0.0, cw.sigma[c]);
    EXPECT_LE(cw.sigma[c], cw.big_sigma[c]);
  }
  EXPECT_NEAR(sum, 2 * g.total_weight(), 1e-12 * sum);
}

INSTANTIATE_TEST_SUITE_P(Seeds, ModularityProperties, ::testing::Range<std::uint64_t>(1, 31));

}  // namespace
}  // namespace gve
