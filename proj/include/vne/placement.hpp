#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/net_model.hpp"

namespace vne {

/// CPU + incident bandwidth demand of a virtual node.
double resource_score(const VirtualNetwork& vn, NodeId v);

/// Breadth-first order of the VN rooted at its highest-scoring node; each level
/// sorted by descending score, ties by ascending id. Throws DisconnectedVN.
std::vector<NodeId> order_virtual_nodes(const VirtualNetwork& vn);

/// Candidate hosts for a virtual node, best first. Must only return nodes that
/// can take `cpu_demand` in the view.
using CandidateRanking =
    std::function<std::vector<NodeId>(const ResourceView& view, double cpu_demand)>;

/// Hosts with room, ascending by incremental power, then descending residual
/// CPU, then ascending id.
std::vector<NodeId> rank_by_power(const ResourceView& view, double cpu_demand,
                                  const PowerConfig& cfg);

/// Hosts with room, descending by residual CPU times incident residual
/// bandwidth, then ascending id.
std::vector<NodeId> rank_by_residual(const ResourceView& view, double cpu_demand);

/// Depth-first placement following `order`. Each virtual node goes on the first
/// candidate whose links to already placed neighbors all route within `hops`;
/// trying another host for a node that had already been placed costs one unit
/// of backtracking budget, and the search gives up once the budget is exceeded.
/// When `root_host` is set the first node in `order` is pinned there.
std::optional<Mapping> backtracking_embed(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                          std::span<const NodeId> order,
                                          std::optional<NodeId> root_host,
                                          const CandidateRanking& rank, std::size_t hops,
                                          std::size_t max_backtrack);

/// A complete mapping together with the view that holds its allocations, for
/// moving single virtual nodes around.
class MappingWorkspace {
 public:
  MappingWorkspace(const SubstrateNetwork& sn, const VirtualNetwork& vn, Mapping m);

  const Mapping& mapping() const { return mapping_; }
  const ResourceView& view() const { return view_; }
  /// Room for virtual node v on host n, counting v's own demand as free if it is there already.
  bool can_host(NodeId v, NodeId n) const;
  /// Moves v to `host` and re-routes its links within max_hops. Returns false
  /// and leaves everything unchanged when CPU or a route is unavailable.
  bool relocate(NodeId v, NodeId host, std::size_t max_hops);

 private:
  const VirtualNetwork* vn_;
  ResourceView view_;
  Mapping mapping_;
};

}  // namespace vne
