#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vne/net_model.hpp"

namespace vne {

/// Server class a generated substrate node is drawn from.
struct NodeClass {
  ProfileId profile;
  double cpu_capacity = 0.0;  // MIPS
};

struct SubstrateGenSpec {
  std::size_t node_count = 50;
  std::size_t target_link_count = 250;
  double bw_min = 50.0;
  double bw_max = 100.0;
  double waxman_alpha = 0.5;
  double waxman_beta = 0.2;
  /// Defaults: ML110 G4 (2 x 1860 MIPS) and ML110 G5 (2 x 2660 MIPS).
  std::vector<NodeClass> node_classes{{ProfileId{0}, 3720.0}, {ProfileId{1}, 5320.0}};
  std::uint64_t seed = 1;

  /// Throws InvalidSpec.
  void validate() const;
};

struct WorkloadSpec {
  std::size_t vnr_count = 1000;
  std::size_t vn_node_min = 2;
  std::size_t vn_node_max = 20;
  double connectivity = 0.5;
  std::vector<double> cpu_choices{2500.0, 2000.0, 1000.0, 500.0};
  double bw_min = 1.0;
  double bw_max = 50.0;
  double arrival_rate = 10.0;  // VNRs per 100 time units
  double lifetime_min = 300.0;
  double lifetime_max = 700.0;
  std::uint64_t seed = 1;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Waxman-scored geometric topology with exactly target_link_count links,
/// always connected. Coordinates lie in [0, 1000]; every node starts off.
SubstrateNetwork gen_substrate(const SubstrateGenSpec& spec);

/// Connected random VNs with Poisson arrivals, sorted by arrival, ids 0..n-1.
std::vector<VNRequest> gen_workload(const WorkloadSpec& spec);

}  // namespace vne
