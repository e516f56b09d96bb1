#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "vne/errors.hpp"
#include "vne/power_model.hpp"

using namespace vne;

namespace {

PowerConfig g4_only() { return PowerConfig{{{"G4", 86.0, 117.0, 10.0}}}; }

SubstrateNode on_node(double capacity, double used, bool routing) {
  SubstrateNode n;
  n.cpu_capacity = capacity;
  n.cpu_residual = capacity - used;
  n.power_on = true;
  n.routing_enabled = routing;
  n.routing_refcount = routing ? 1 : 0;
  return n;
}

VNRequest request(VnrId id, VirtualNetwork vn) {
  VNRequest r;
  r.id = id;
  r.vn = std::move(vn);
  r.lifetime = 1.0;
  return r;
}

}  // namespace

TEST(NodePower, OffNodeDrawsNothing) {
  SubstrateNode n;
  n.cpu_capacity = 100.0;
  n.cpu_residual = 100.0;
  EXPECT_EQ(node_power(n, g4_only()), 0.0);
}

TEST(NodePower, FullLoadWithoutRouting) { EXPECT_DOUBLE_EQ(node_power(on_node(100, 100, false), g4_only()), 117.0); }

TEST(NodePower, HalfLoadWithRouting) { EXPECT_DOUBLE_EQ(node_power(on_node(100, 50, true), g4_only()), 111.5); }

TEST(NodePower, UnknownProfile) {
  SubstrateNode n = on_node(100, 0, false);
  n.profile = ProfileId{5};
  EXPECT_THROW(node_power(n, g4_only()), UnknownProfile);
}

TEST(NodePower, MonotoneInUtilizationAndRoutingGap) {
  const PowerConfig cfg = PowerConfig::defaults();
  for (std::uint16_t p = 0; p < 2; ++p) {
    double last = -1.0;
    for (int used = 0; used <= 100; used += 5) {
      SubstrateNode n = on_node(100, used, false);
      n.profile = ProfileId{p};
      double w = node_power(n, cfg);
      EXPECT_GE(w, last);
      last = w;
      SubstrateNode r = n;
      r.routing_enabled = true;
      r.routing_refcount = 1;
      EXPECT_NEAR(node_power(r, cfg) - w, cfg.profile(ProfileId{p}).p_routing, 1e-12);
    }
  }
}

TEST(NodePower, RoutingCardStaysWithinFivePercentOfIdle) {
  PowerConfig cfg{{{"low", 200.0, 300.0, 0.05 * 200.0}}};
  SubstrateNode relay = on_node(100, 0, true);
  double routing_share = node_power(relay, cfg) - cfg.profiles[0].p_idle;
  EXPECT_LE(routing_share, 0.05 * cfg.profiles[0].p_idle);
}

TEST(NetworkPower, SumsNodes) {
  SubstrateNetwork sn;
  sn.add_node(100, ProfileId{0});
  sn.add_node(100, ProfileId{1});
  const PowerConfig cfg = PowerConfig::defaults();
  EXPECT_EQ(network_power(sn, cfg), 0.0);

  VirtualNetwork vn;
  vn.add_node(kResourceQuantum);
  vn.add_node(kResourceQuantum);
  sn.apply_mapping(request(1, vn), Mapping{{0, 1}, {}});
  EXPECT_NEAR(network_power(sn, cfg), 86.0 + 93.7, 1e-3);
  EXPECT_DOUBLE_EQ(network_power(sn, cfg), oracle::network_power(sn, cfg));
}

TEST(EmbeddingPower, OffHostChargesIdlePlusProportional) {
  SubstrateNetwork sn;
  sn.add_node(100, ProfileId{0});
  VirtualNetwork vn;
  vn.add_node(25);
  EXPECT_DOUBLE_EQ(embedding_power(sn, vn, Mapping{{0}, {}}, g4_only()), 93.75);
}

TEST(EmbeddingPower, AlreadyActiveChargesOnlyProportional) {
  SubstrateNetwork sn;
  for (int i = 0; i < 3; ++i) sn.add_node(100, ProfileId{0});
  sn.add_link(0, 1, 100);
  sn.add_link(1, 2, 100);
  VirtualNetwork warm;
  warm.add_node(10);
  warm.add_node(10);
  warm.add_link(0, 1, 1);
  sn.apply_mapping(request(1, warm), Mapping{{0, 2}, {SubstratePath{{0, 1, 2}}}});

  VirtualNetwork vn;
  vn.add_node(20);
  vn.add_node(40);
  vn.add_link(0, 1, 1);
  double w = embedding_power(sn, vn, Mapping{{0, 2}, {SubstratePath{{0, 1, 2}}}}, g4_only());
  EXPECT_DOUBLE_EQ(w, 31.0 * 0.2 + 31.0 * 0.4);
}

TEST(EmbeddingPower, SequentialAccountingOnColdPath) {
  SubstrateNetwork sn;
  for (int i = 0; i < 3; ++i) sn.add_node(100, ProfileId{0});
  sn.add_link(0, 1, 100);
  sn.add_link(1, 2, 100);
  VirtualNetwork vn;
  vn.add_node(50);
  vn.add_node(25);
  vn.add_link(0, 1, 5);
  const double expected = (86.0 + 31.0 * 0.5) + (86.0 + 31.0 * 0.25) + 96.0 + 10.0 + 10.0;
  Mapping m{{0, 2}, {SubstratePath{{0, 1, 2}}}};
  EXPECT_DOUBLE_EQ(embedding_power(sn, vn, m, g4_only()), expected);
}

TEST(EmbeddingPower, TwoVirtualNodesOnOneColdHostPayIdleOnce) {
  SubstrateNetwork sn;
  sn.add_node(100, ProfileId{0});
  VirtualNetwork vn;
  vn.add_node(10);
  vn.add_node(30);
  vn.add_link(0, 1, 5);
  EXPECT_DOUBLE_EQ(embedding_power(sn, vn, Mapping{{0, 0}, {SubstratePath{}}}, g4_only()), 86.0 + 31.0 * 0.4);
}

TEST(EmbeddingPower, InvalidStructure) {
  SubstrateNetwork sn;
  sn.add_node(100, ProfileId{0});
  VirtualNetwork vn;
  vn.add_node(10);
  EXPECT_THROW(embedding_power(sn, vn, Mapping{{3}, {}}, g4_only()), InvalidMapping);
}

TEST(EmbeddingPower, IsTheExactMarginalOfNetworkPower) {
  std::mt19937_64 rng(77);
  const PowerConfig cfg = PowerConfig::defaults();
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    SubstrateNetwork sn = oracle::random_substrate(rng, 7, 5, 60, 200, 20, 60);
    VnrId id = 0;
    for (int k = 0; k < 4; ++k) {
      VNRequest r = request(id++, oracle::random_vn(rng, 3, 1, 40, 1, 15, 0.3));
      auto all = oracle::all_feasible_mappings(sn, r.vn, 2);
      if (all.empty()) continue;
      const Mapping& m = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
      const double before = network_power(sn, cfg);
      const double predicted = embedding_power(sn, r.vn, m, cfg);
      sn.apply_mapping(r, m);
      EXPECT_NEAR(network_power(sn, cfg) - before, predicted, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(PowerConfigFile, ParsesProfiles) {
  const char* text =
      "# servers\n"
      "[profile]\n"
      "name = A\n"
      "p_idle_watts = 50\n"
      "p_max_watts = 80.5\n"
      "p_routing_watts = 4\n"
      "\n"
      "[profile]\n"
      "name = B   # trailing comment\n"
      "p_idle_watts = 60\n"
      "p_max_watts = 90\n"
      "p_routing_watts = 0\n";
  PowerConfig cfg = parse_power_config(text);
  ASSERT_EQ(cfg.profiles.size(), 2u);
  EXPECT_EQ(cfg.profiles[0].name, "A");
  EXPECT_EQ(cfg.profiles[0].p_max, 80.5);
  EXPECT_EQ(cfg.profiles[1].name, "B");
  EXPECT_EQ(cfg.find("B"), ProfileId{1});
  EXPECT_FALSE(cfg.find("C"));
}

TEST(PowerConfigFile, RoundTripsDefaults) {
  PowerConfig cfg = PowerConfig::defaults();
  PowerConfig back = parse_power_config(format_power_config(cfg));
  ASSERT_EQ(back.profiles.size(), cfg.profiles.size());
  for (std::size_t i = 0; i < cfg.profiles.size(); ++i) {
    EXPECT_EQ(back.profiles[i].name, cfg.profiles[i].name);
    EXPECT_EQ(back.profiles[i].p_idle, cfg.profiles[i].p_idle);
    EXPECT_EQ(back.profiles[i].p_max, cfg.profiles[i].p_max);
    EXPECT_EQ(back.profiles[i].p_routing, cfg.profiles[i].p_routing);
  }
}

TEST(PowerConfigFile, RejectsBadInput) {
  EXPECT_THROW(parse_power_config(""), Error);
  EXPECT_THROW(parse_power_config("[profile]\nname = A\np_idle_watts = 90\np_max_watts = 80\np_routing_watts = 1\n"),
               Error);
  try {
    parse_power_config("[profile]\nname = A\nbogus = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_power_config("/nonexistent/profiles.conf"), IoError);
}

TEST(PowerConfigFile, ShippedProfilesMatchDefaults) {
  PowerConfig shipped = load_power_config(VNE_DATA_DIR "/power_profiles.conf");
  PowerConfig builtin = PowerConfig::defaults();
  ASSERT_EQ(shipped.profiles.size(), builtin.profiles.size());
  for (std::size_t i = 0; i < builtin.profiles.size(); ++i) {
    EXPECT_EQ(shipped.profiles[i].name, builtin.profiles[i].name);
    EXPECT_EQ(shipped.profiles[i].p_idle, builtin.profiles[i].p_idle);
    EXPECT_EQ(shipped.profiles[i].p_max, builtin.profiles[i].p_max);
    EXPECT_EQ(shipped.profiles[i].p_routing, builtin.profiles[i].p_routing);
  }
}
