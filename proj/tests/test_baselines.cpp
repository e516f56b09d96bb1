#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "vne/baselines.hpp"

using namespace vne;

namespace {

VNRequest request(VirtualNetwork vn) {
  VNRequest r;
  r.vn = std::move(vn);
  r.lifetime = 1.0;
  return r;
}

VirtualNetwork pair_vn(double a, double b, double bw) {
  VirtualNetwork vn;
  vn.add_node(a);
  vn.add_node(b);
  vn.add_link(0, 1, bw);
  return vn;
}

// A=0, B=1, C=2, D=3; A-B and C-D are wide, B-C is thin. B and C score highest.
SubstrateNetwork thin_middle() {
  SubstrateNetwork sn;
  for (int i = 0; i < 4; ++i) sn.add_node(10, ProfileId{0});
  sn.add_link(0, 1, 100);
  sn.add_link(2, 3, 100);
  sn.add_link(1, 2, 1);
  return sn;
}

}  // namespace

TEST(GreedyTwoStage, SingleNodeGoesToBestScore) {
  SubstrateNetwork sn;
  sn.add_node(100, ProfileId{0});
  sn.add_node(50, ProfileId{0});
  sn.add_node(100, ProfileId{0});
  sn.add_node(80, ProfileId{0});
  sn.add_link(0, 1, 10);
  sn.add_link(1, 2, 20);
  sn.add_link(2, 3, 30);
  // Scores: 0 -> 1000, 1 -> 1500, 2 -> 5000, 3 -> 2400.
  VirtualNetwork vn;
  vn.add_node(10);
  auto m = greedy_two_stage(sn, request(vn), 2);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->node_map[0], 2u);
}

TEST(GreedyTwoStage, LinkStageFailureRejects) {
  EXPECT_FALSE(greedy_two_stage(thin_middle(), request(pair_vn(8, 8, 5)), 1));
}

TEST(GreedyTwoStage, NoCpuAnywhere) {
  VirtualNetwork vn;
  vn.add_node(11);
  EXPECT_FALSE(greedy_two_stage(thin_middle(), request(vn), 2));
}

TEST(BacktrackBfs, CoordinatedPlacementSucceedsWhereGreedyFails) {
  SubstrateNetwork sn = thin_middle();
  VNRequest r = request(pair_vn(8, 8, 5));
  auto m = backtrack_bfs(sn, r, 1, 6);
  ASSERT_TRUE(m);
  EXPECT_TRUE(is_feasible(sn, r.vn, *m));
  EXPECT_EQ(m->node_map[0], 1u);
  EXPECT_EQ(m->node_map[1], 0u);
}

TEST(BacktrackBfs, ZeroBudgetAndInfeasibleFirstBranch) {
  // The root ranks node 2 first thanks to a wide link into CPU-less node 4,
  // but nothing placed next to 2 can be reached; moving the root costs budget.
  SubstrateNetwork sn;
  sn.add_node(10, ProfileId{0});
  sn.add_node(10, ProfileId{0});
  sn.add_node(20, ProfileId{0});
  sn.add_node(20, ProfileId{0});
  sn.add_node(0, ProfileId{0});
  sn.add_link(2, 0, 1);
  sn.add_link(2, 4, 1000);
  sn.add_link(3, 1, 100);
  VNRequest r = request(pair_vn(8, 15, 5));
  EXPECT_FALSE(backtrack_bfs(sn, r, 1, 0));
  auto m = backtrack_bfs(sn, r, 1, 1);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->node_map, (std::vector<NodeId>{1, 3}));
}

TEST(BacktrackBfs, DeterministicSingleCandidate) {
  SubstrateNetwork sn;
  sn.add_node(10, ProfileId{0});
  sn.add_node(1, ProfileId{0});
  sn.add_link(0, 1, 5);
  VirtualNetwork vn;
  vn.add_node(10);
  auto a = backtrack_bfs(sn, request(vn), 2, 3);
  auto b = backtrack_bfs(sn, request(vn), 2, 3);
  ASSERT_TRUE(a);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(a->node_map[0], 0u);
}

TEST(Baselines, ReturnOnlyFeasibleMappings) {
  std::mt19937_64 rng(21);
  int found = 0;
  for (int t = 0; t < 200; ++t) {
    SubstrateNetwork sn = oracle::random_substrate(rng, 10, 8, 20, 80, 5, 40);
    VNRequest r = request(oracle::random_vn(rng, 4, 5, 40, 1, 20, 0.4));
    for (auto m : {greedy_two_stage(sn, r, 2), backtrack_bfs(sn, r, 2, 12)}) {
      if (!m) continue;
      ++found;
      EXPECT_TRUE(is_feasible(sn, r.vn, *m));
      for (const auto& p : m->link_map) EXPECT_LE(p.length(), 2u);
    }
  }
  EXPECT_GT(found, 50);
}
