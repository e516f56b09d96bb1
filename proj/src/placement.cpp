#include "vne/placement.hpp"

#include <algorithm>

#include "vne/errors.hpp"
#include "vne/power_model.hpp"

namespace vne {

double resource_score(const VirtualNetwork& vn, NodeId v) {
  double score = vn.node(v).cpu_demand;
  for (LinkId l : vn.incident(v)) score += vn.link(l).bw_demand;
  return score;
}

std::vector<NodeId> order_virtual_nodes(const VirtualNetwork& vn) {
  const std::size_t n = vn.node_count();
  if (n == 0) return {};
  std::vector<double> score(n);
  for (NodeId v = 0; v < n; ++v) score[v] = resource_score(vn, v);
  auto before = [&](NodeId a, NodeId b) { return score[a] != score[b] ? score[a] > score[b] : a < b; };

  NodeId root = 0;
  for (NodeId v = 1; v < n; ++v)
    if (before(v, root)) root = v;

  std::vector<char> seen(n, 0);
  std::vector<NodeId> order{root};
  seen[root] = 1;
  std::vector<NodeId> level{root};
  while (!level.empty()) {
    std::vector<NodeId> next;
    for (NodeId u : level)
      for (LinkId l : vn.incident(u)) {
        NodeId w = vn.link(l).other(u);
        if (!seen[w]) {
          seen[w] = 1;
          next.push_back(w);
        }
      }
    std::sort(next.begin(), next.end(), before);
    order.insert(order.end(), next.begin(), next.end());
    level = std::move(next);
  }
  if (order.size() != n)
    throw DisconnectedVN("virtual network has " + std::to_string(n - order.size()) +
                         " node(s) unreachable from its root");
  return order;
}

std::vector<NodeId> rank_by_power(const ResourceView& view, double cpu_demand,
                                  const PowerConfig& cfg) {
  struct Entry {
    double power;
    double residual;
    NodeId id;
  };
  std::vector<Entry> entries;
  for (const SubstrateNode& n : view.substrate().nodes())
    if (view.fits_cpu(n.id, cpu_demand))
      entries.push_back({placement_power(view, n.id, cpu_demand, cfg), view.cpu_residual(n.id), n.id});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.power != b.power) return a.power < b.power;
    if (a.residual != b.residual) return a.residual > b.residual;
    return a.id < b.id;
  });
  std::vector<NodeId> out;
  out.reserve(entries.size());
  for (const Entry& e : entries) out.push_back(e.id);
  return out;
}

std::vector<NodeId> rank_by_residual(const ResourceView& view, double cpu_demand) {
  const SubstrateNetwork& sn = view.substrate();
  std::vector<std::pair<double, NodeId>> entries;
  for (const SubstrateNode& n : sn.nodes()) {
    if (!view.fits_cpu(n.id, cpu_demand)) continue;
    double bw = 0.0;
    for (LinkId l : sn.incident(n.id)) bw += view.bw_residual(l);
    entries.emplace_back(view.cpu_residual(n.id) * bw, n.id);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<NodeId> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.second);
  return out;
}

namespace {

class BacktrackingSearch {
 public:
  BacktrackingSearch(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                     std::span<const NodeId> order, std::optional<NodeId> root_host,
                     const CandidateRanking& rank, std::size_t hops, std::size_t max_backtrack)
      : vn_(vn),
        order_(order),
        root_host_(root_host),
        rank_(rank),
        hops_(hops),
        max_backtrack_(max_backtrack),
        view_(sn),
        placed_(vn.node_count(), 0) {
    mapping_.node_map.assign(vn.node_count(), 0);
    mapping_.link_map.assign(vn.link_count(), {});
  }

  std::optional<Mapping> run() {
    if (place(0)) return mapping_;
    return std::nullopt;
  }

 private:
  bool place(std::size_t level) {
    if (level == order_.size()) return true;
    const NodeId v = order_[level];
    const double demand = vn_.node(v).cpu_demand;

    std::vector<NodeId> candidates;
    if (level == 0 && root_host_) {
      if (view_.fits_cpu(*root_host_, demand)) candidates.push_back(*root_host_);
    } else {
      candidates = rank_(view_, demand);
    }

    bool assigned_before = false;
    for (NodeId host : candidates) {
      if (!view_.fits_cpu(host, demand)) continue;
      view_.host(host, demand);
      mapping_.node_map[v] = host;
      placed_[v] = 1;

      std::vector<LinkId> routed;
      bool links_ok = true;
      for (LinkId l : vn_.incident(v)) {
        const VirtualLink& vl = vn_.link(l);
        if (!placed_[vl.other(v)]) continue;
        auto path = shortest_feasible_path(view_, mapping_.node_map[vl.a], mapping_.node_map[vl.b],
                                           vl.bw_demand, hops_);
        if (!path) {
          links_ok = false;
          break;
        }
        mapping_.link_map[l] = std::move(*path);
        view_.route(mapping_.link_map[l], vl.bw_demand);
        routed.push_back(l);
      }

      if (links_ok) {
        if (assigned_before && ++backtracks_ > max_backtrack_) exhausted_ = true;
        assigned_before = true;
        if (!exhausted_ && place(level + 1)) return true;
      }

      for (LinkId l : routed) {
        view_.unroute(mapping_.link_map[l], vn_.link(l).bw_demand);
        mapping_.link_map[l] = {};
      }
      placed_[v] = 0;
      view_.unhost(host, demand);
      if (exhausted_) return false;
    }
    return false;
  }

  const VirtualNetwork& vn_;
  std::span<const NodeId> order_;
  std::optional<NodeId> root_host_;
  const CandidateRanking& rank_;
  std::size_t hops_;
  std::size_t max_backtrack_;
  ResourceView view_;
  Mapping mapping_;
  std::vector<char> placed_;
  std::size_t backtracks_ = 0;
  bool exhausted_ = false;
};

}  // namespace

std::optional<Mapping> backtracking_embed(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                          std::span<const NodeId> order,
                                          std::optional<NodeId> root_host,
                                          const CandidateRanking& rank, std::size_t hops,
                                          std::size_t max_backtrack) {
  if (order.size() != vn.node_count())
    throw InvalidMapping("placement order does not cover the virtual network");
  return BacktrackingSearch(sn, vn, order, root_host, rank, hops, max_backtrack).run();
}

// ---------------------------------------------------------------------------

MappingWorkspace::MappingWorkspace(const SubstrateNetwork& sn, const VirtualNetwork& vn, Mapping m)
    : vn_(&vn), view_(sn), mapping_(std::move(m)) {
  view_.add_mapping(vn, mapping_);
}

bool MappingWorkspace::can_host(NodeId v, NodeId n) const {
  double demand = vn_->node(v).cpu_demand;
  double room = view_.cpu_residual(n) + (mapping_.node_map[v] == n ? demand : 0.0);
  return demand <= room;
}

bool MappingWorkspace::relocate(NodeId v, NodeId host, std::size_t max_hops) {
  const NodeId old_host = mapping_.node_map[v];
  if (host == old_host) return true;
  if (!can_host(v, host)) return false;

  const double demand = vn_->node(v).cpu_demand;
  auto incident = vn_->incident(v);
  std::vector<SubstratePath> old_paths;
  old_paths.reserve(incident.size());
  for (LinkId l : incident) {
    old_paths.push_back(mapping_.link_map[l]);
    view_.unroute(mapping_.link_map[l], vn_->link(l).bw_demand);
  }
  view_.unhost(old_host, demand);
  view_.host(host, demand);
  mapping_.node_map[v] = host;

  std::size_t done = 0;
  for (; done < incident.size(); ++done) {
    const VirtualLink& vl = vn_->link(incident[done]);
    auto path = shortest_feasible_path(view_, mapping_.node_map[vl.a], mapping_.node_map[vl.b],
                                       vl.bw_demand, max_hops);
    if (!path) break;
    mapping_.link_map[vl.id] = std::move(*path);
    view_.route(mapping_.link_map[vl.id], vl.bw_demand);
  }
  if (done == incident.size()) return true;

  for (std::size_t i = 0; i < done; ++i)
    view_.unroute(mapping_.link_map[incident[i]], vn_->link(incident[i]).bw_demand);
  view_.unhost(host, demand);
  view_.host(old_host, demand);
  mapping_.node_map[v] = old_host;
  for (std::size_t i = 0; i < incident.size(); ++i) {
    mapping_.link_map[incident[i]] = std::move(old_paths[i]);
    view_.route(mapping_.link_map[incident[i]], vn_->link(incident[i]).bw_demand);
  }
  return false;
}

}  // namespace vne
