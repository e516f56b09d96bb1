#include "vne/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "vne/embedding.hpp"
#include "vne/placement.hpp"

namespace vne {

std::optional<Mapping> greedy_two_stage(const SubstrateNetwork& sn, const VNRequest& vnr,
                                        std::size_t hops_max) {
  const VirtualNetwork& vn = vnr.vn;
  std::vector<NodeId> order(vn.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<double> score(vn.node_count());
  for (NodeId v = 0; v < vn.node_count(); ++v) score[v] = resource_score(vn, v);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return score[a] > score[b]; });

  ResourceView view(sn);
  Mapping m;
  m.node_map.assign(vn.node_count(), 0);
  m.link_map.assign(vn.link_count(), {});
  for (NodeId v : order) {
    const double demand = vn.node(v).cpu_demand;
    auto hosts = rank_by_residual(view, demand);
    if (hosts.empty()) return std::nullopt;
    m.node_map[v] = hosts.front();
    view.host(hosts.front(), demand);
  }
  for (const VirtualLink& l : vn.links()) {
    auto path = shortest_feasible_path(view, m.node_map[l.a], m.node_map[l.b], l.bw_demand, hops_max);
    if (!path) return std::nullopt;
    m.link_map[l.id] = std::move(*path);
    view.route(m.link_map[l.id], l.bw_demand);
  }
  return m;
}

std::optional<Mapping> backtrack_bfs(const SubstrateNetwork& sn, const VNRequest& vnr,
                                     std::size_t hops_max, std::size_t max_backtrack) {
  const VirtualNetwork& vn = vnr.vn;
  if (vn.node_count() == 0) return Mapping{};
  if (!vn.connected()) return std::nullopt;
  const std::vector<NodeId> order = order_virtual_nodes(vn);
  CandidateRanking rank = [](const ResourceView& view, double cpu) {
    return rank_by_residual(view, cpu);
  };
  return backtracking_embed(sn, vn, order, std::nullopt, rank, hops_max, max_backtrack);
}

}  // namespace vne
