#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace vne {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using VnrId = std::uint64_t;

/// Index into PowerConfig::profiles.
struct ProfileId {
  std::uint16_t value = 0;
  friend auto operator<=>(const ProfileId&, const ProfileId&) = default;
};

/// Resource amounts (CPU, bandwidth) live on a 2^-16 grid. Every value on the
/// grid below 2^37 is exact in a double, so allocate/release sequences cancel
/// bit-exactly no matter how they interleave.
inline constexpr double kResourceQuantum = 1.0 / 65536.0;
double quantize(double amount);

struct SubstrateNode {
  NodeId id = 0;
  double cpu_capacity = 0.0;
  double cpu_residual = 0.0;
  ProfileId profile{};
  bool power_on = false;
  bool routing_enabled = false;
  std::uint32_t routing_refcount = 0;
  std::uint32_t hosted = 0;  // virtual nodes currently placed here, over all VNRs
  double x = 0.0;
  double y = 0.0;

  /// Allocated fraction of CPU capacity in [0, 1].
  double utilization() const {
    return cpu_capacity > 0.0 ? (cpu_capacity - cpu_residual) / cpu_capacity : 0.0;
  }
};

struct SubstrateLink {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double bw_capacity = 0.0;
  double bw_residual = 0.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

/// Loop-free node sequence. Empty means the two endpoints are co-located.
struct SubstratePath {
  std::vector<NodeId> nodes;

  bool empty() const { return nodes.empty(); }
  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool contains(NodeId n) const;
  friend bool operator==(const SubstratePath&, const SubstratePath&) = default;
};

struct Mapping {
  std::vector<NodeId> node_map;          // per virtual node
  std::vector<SubstratePath> link_map;   // per virtual link
  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct VirtualNode {
  NodeId id = 0;
  double cpu_demand = 0.0;
  friend bool operator==(const VirtualNode&, const VirtualNode&) = default;
};

struct VirtualLink {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double bw_demand = 0.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  friend bool operator==(const VirtualLink&, const VirtualLink&) = default;
};

class VirtualNetwork {
 public:
  /// Throws InvalidSpec for non-positive demand.
  NodeId add_node(double cpu_demand);
  /// Throws InvalidSpec for self-loops, duplicates, unknown endpoints or non-positive demand.
  LinkId add_link(NodeId a, NodeId b, double bw_demand);

  std::span<const VirtualNode> nodes() const { return nodes_; }
  std::span<const VirtualLink> links() const { return links_; }
  const VirtualNode& node(NodeId id) const { return nodes_.at(id); }
  const VirtualLink& link(LinkId id) const { return links_.at(id); }
  std::span<const LinkId> incident(NodeId id) const { return adjacency_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  bool connected() const;

  friend bool operator==(const VirtualNetwork&, const VirtualNetwork&) = default;

 private:
  std::vector<VirtualNode> nodes_;
  std::vector<VirtualLink> links_;
  std::vector<std::vector<LinkId>> adjacency_;
};

enum class VnrState { pending, active, rejected, departed };

struct VNRequest {
  VnrId id = 0;
  VirtualNetwork vn;
  double arrival = 0.0;
  double lifetime = 0.0;
  VnrState state = VnrState::pending;

  double departure() const { return arrival + lifetime; }
};

class SubstrateNetwork {
 public:
  NodeId add_node(double cpu_capacity, ProfileId profile, double x = 0.0, double y = 0.0);
  /// Throws InvalidSpec for self-loops, parallel links or unknown endpoints.
  LinkId add_link(NodeId a, NodeId b, double bw_capacity);

  std::span<const SubstrateNode> nodes() const { return nodes_; }
  std::span<const SubstrateLink> links() const { return links_; }
  const SubstrateNode& node(NodeId id) const { return nodes_.at(id); }
  const SubstrateLink& link(LinkId id) const { return links_.at(id); }
  std::span<const LinkId> incident(NodeId id) const { return adjacency_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::optional<LinkId> find_link(NodeId a, NodeId b) const;
  bool connected() const;

  /// Allocates the mapping's resources atomically. Throws InsufficientCpu,
  /// InsufficientBandwidth or InvalidMapping and leaves the network untouched
  /// on failure.
  void apply_mapping(const VNRequest& vnr, const Mapping& m);
  /// Returns exactly what apply_mapping took. Throws NotAllocated when the VNR
  /// holds no allocation, InvalidMapping when m differs from the applied one.
  void release_mapping(const VNRequest& vnr, const Mapping& m);

  bool is_allocated(VnrId id) const { return allocations_.contains(id); }
  std::size_t allocation_count() const { return allocations_.size(); }

  /// Compares topology, capacities, residuals and power/routing state; ignores
  /// the allocation ledger.
  bool same_state(const SubstrateNetwork& other) const;
  /// Compares topology, capacities, coordinates and profiles only.
  bool same_topology(const SubstrateNetwork& other) const;

 private:
  struct Allocation {
    Mapping mapping;
    std::vector<std::pair<NodeId, double>> cpu;
    std::vector<std::pair<LinkId, double>> bw;
    std::vector<NodeId> path_nodes;  // with multiplicity, one entry per path visit
  };

  void settle_power(NodeId id);

  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  std::vector<std::vector<LinkId>> adjacency_;
  std::map<VnrId, Allocation> allocations_;
};

/// Throws InvalidMapping when m does not fit the VN's shape or names paths that
/// do not exist in sn. Capacities are not checked.
void check_structure(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m);

/// Substrate state plus the tentative allocations of a single mapping under
/// construction. Solvers use it to test placements without copying the network.
class ResourceView {
 public:
  explicit ResourceView(const SubstrateNetwork& sn);

  const SubstrateNetwork& substrate() const { return *sn_; }

  double cpu_residual(NodeId n) const { return sn_->node(n).cpu_residual - cpu_used_[n]; }
  double bw_residual(LinkId l) const { return sn_->link(l).bw_residual - bw_used_[l]; }
  bool fits_cpu(NodeId n, double demand) const { return demand <= cpu_residual(n); }
  /// Node is on in the substrate or switched on by a tentative allocation.
  bool powered(NodeId n) const { return sn_->node(n).power_on || hosted_[n] > 0 || relayed_[n] > 0; }
  bool routing(NodeId n) const { return sn_->node(n).routing_enabled || relayed_[n] > 0; }

  void host(NodeId n, double cpu);
  void unhost(NodeId n, double cpu);
  void route(const SubstratePath& path, double bw);
  void unroute(const SubstratePath& path, double bw);

  void add_mapping(const VirtualNetwork& vn, const Mapping& m);
  void remove_mapping(const VirtualNetwork& vn, const Mapping& m);

  /// True when no tentative allocation overdraws a residual.
  bool within_capacity() const;
  /// First overdrawn node or link, for error reporting.
  std::optional<NodeId> overdrawn_node() const;
  std::optional<LinkId> overdrawn_link() const;

  std::span<const double> cpu_used() const { return cpu_used_; }
  std::span<const double> bw_used() const { return bw_used_; }

 private:
  const SubstrateNetwork* sn_;
  std::vector<double> cpu_used_;
  std::vector<double> bw_used_;
  std::vector<std::uint32_t> hosted_;
  std::vector<std::uint32_t> relayed_;
};

/// Feasibility check against current residuals (structure plus capacity).
bool is_feasible(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m);

}  // namespace vne
