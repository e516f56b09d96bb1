#include "vne/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vne/errors.hpp"

namespace vne {

double quantize(double amount) { return std::round(amount / kResourceQuantum) * kResourceQuantum; }

bool SubstratePath::contains(NodeId n) const {
  return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

namespace {

template <typename LinkRange>
bool graph_connected(std::size_t node_count, const std::vector<std::vector<LinkId>>& adjacency,
                     const LinkRange& links) {
  if (node_count <= 1) return true;
  std::vector<char> seen(node_count, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (LinkId l : adjacency[n]) {
      NodeId m = links[l].other(n);
      if (!seen[m]) {
        seen[m] = 1;
        ++reached;
        stack.push_back(m);
      }
    }
  }
  return reached == node_count;
}

}  // namespace

// ---------------------------------------------------------------------------
// VirtualNetwork

NodeId VirtualNetwork::add_node(double cpu_demand) {
  if (!(cpu_demand > 0.0) || !std::isfinite(cpu_demand))
    throw InvalidSpec("virtual node CPU demand must be positive");
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({id, quantize(cpu_demand)});
  adjacency_.emplace_back();
  return id;
}

LinkId VirtualNetwork::add_link(NodeId a, NodeId b, double bw_demand) {
  if (a >= nodes_.size() || b >= nodes_.size())
    throw InvalidSpec("virtual link endpoint out of range");
  if (a == b) throw InvalidSpec("virtual link is a self-loop");
  if (!(bw_demand > 0.0) || !std::isfinite(bw_demand))
    throw InvalidSpec("virtual link bandwidth demand must be positive");
  for (LinkId l : adjacency_[a])
    if (links_[l].other(a) == b) throw InvalidSpec("duplicate virtual link");
  auto id = static_cast<LinkId>(links_.size());
  links_.push_back({id, a, b, quantize(bw_demand)});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  return id;
}

bool VirtualNetwork::connected() const { return graph_connected(nodes_.size(), adjacency_, links_); }

// ---------------------------------------------------------------------------
// SubstrateNetwork

NodeId SubstrateNetwork::add_node(double cpu_capacity, ProfileId profile, double x, double y) {
  if (!(cpu_capacity >= 0.0) || !std::isfinite(cpu_capacity))
    throw InvalidSpec("substrate CPU capacity must be non-negative");
  auto id = static_cast<NodeId>(nodes_.size());
  SubstrateNode n;
  n.id = id;
  n.cpu_capacity = quantize(cpu_capacity);
  n.cpu_residual = n.cpu_capacity;
  n.profile = profile;
  n.x = x;
  n.y = y;
  nodes_.push_back(n);
  adjacency_.emplace_back();
  return id;
}

LinkId SubstrateNetwork::add_link(NodeId a, NodeId b, double bw_capacity) {
  if (a >= nodes_.size() || b >= nodes_.size())
    throw InvalidSpec("substrate link endpoint out of range");
  if (a == b) throw InvalidSpec("substrate link is a self-loop");
  if (find_link(a, b)) throw InvalidSpec("parallel substrate link");
  if (!(bw_capacity >= 0.0) || !std::isfinite(bw_capacity))
    throw InvalidSpec("substrate bandwidth must be non-negative");
  auto id = static_cast<LinkId>(links_.size());
  double bw = quantize(bw_capacity);
  links_.push_back({id, a, b, bw, bw});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  return id;
}

std::optional<LinkId> SubstrateNetwork::find_link(NodeId a, NodeId b) const {
  if (a >= adjacency_.size()) return std::nullopt;
  for (LinkId l : adjacency_[a])
    if (links_[l].other(a) == b) return l;
  return std::nullopt;
}

bool SubstrateNetwork::connected() const {
  return graph_connected(nodes_.size(), adjacency_, links_);
}

void check_structure(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m) {
  if (m.node_map.size() != vn.node_count())
    throw InvalidMapping("node map has " + std::to_string(m.node_map.size()) + " entries, VN has " +
                         std::to_string(vn.node_count()) + " nodes");
  if (m.link_map.size() != vn.link_count())
    throw InvalidMapping("link map has " + std::to_string(m.link_map.size()) + " entries, VN has " +
                         std::to_string(vn.link_count()) + " links");
  for (NodeId host : m.node_map)
    if (host >= sn.node_count()) throw InvalidMapping("host " + std::to_string(host) + " out of range");

  std::vector<char> on_path(sn.node_count(), 0);
  for (const VirtualLink& vl : vn.links()) {
    const SubstratePath& path = m.link_map[vl.id];
    NodeId from = m.node_map[vl.a];
    NodeId to = m.node_map[vl.b];
    std::string which = "virtual link " + std::to_string(vl.id);
    if (from == to) {
      if (!path.empty()) throw InvalidMapping(which + " joins co-located nodes but has a path");
      continue;
    }
    if (path.nodes.size() < 2) throw InvalidMapping(which + " has no path");
    if (path.nodes.front() != from || path.nodes.back() != to)
      throw InvalidMapping(which + " path endpoints do not match its hosts");
    for (NodeId n : path.nodes) {
      if (n >= sn.node_count()) throw InvalidMapping(which + " path leaves the substrate");
      if (on_path[n]) throw InvalidMapping(which + " path has a loop");
      on_path[n] = 1;
    }
    for (NodeId n : path.nodes) on_path[n] = 0;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
      if (!sn.find_link(path.nodes[i], path.nodes[i + 1]))
        throw InvalidMapping(which + " path uses a missing substrate link");
  }
}

void SubstrateNetwork::apply_mapping(const VNRequest& vnr, const Mapping& m) {
  if (allocations_.contains(vnr.id))
    throw InvalidMapping("VNR " + std::to_string(vnr.id) + " is already allocated");
  check_structure(*this, vnr.vn, m);

  ResourceView view(*this);
  view.add_mapping(vnr.vn, m);
  if (auto n = view.overdrawn_node()) throw InsufficientCpu(*n);
  if (auto l = view.overdrawn_link()) throw InsufficientBandwidth(*l);

  // Everything below is non-throwing apart from allocation failure.
  Allocation record;
  record.mapping = m;
  for (NodeId n = 0; n < nodes_.size(); ++n)
    if (view.cpu_used()[n] > 0.0) record.cpu.emplace_back(n, view.cpu_used()[n]);
  for (LinkId l = 0; l < links_.size(); ++l)
    if (view.bw_used()[l] > 0.0) record.bw.emplace_back(l, view.bw_used()[l]);
  for (const SubstratePath& p : m.link_map)
    record.path_nodes.insert(record.path_nodes.end(), p.nodes.begin(), p.nodes.end());

  for (auto [n, amount] : record.cpu) nodes_[n].cpu_residual -= amount;
  for (auto [l, amount] : record.bw) links_[l].bw_residual -= amount;
  for (NodeId host : m.node_map) {
    nodes_[host].hosted += 1;
    nodes_[host].power_on = true;
  }
  for (NodeId n : record.path_nodes) {
    nodes_[n].routing_refcount += 1;
    nodes_[n].routing_enabled = true;
    nodes_[n].power_on = true;
  }
  allocations_.emplace(vnr.id, std::move(record));
}

void SubstrateNetwork::release_mapping(const VNRequest& vnr, const Mapping& m) {
  auto it = allocations_.find(vnr.id);
  if (it == allocations_.end()) throw NotAllocated(vnr.id);
  if (it->second.mapping != m)
    throw InvalidMapping("mapping differs from the one applied for VNR " + std::to_string(vnr.id));

  const Allocation& record = it->second;
  for (auto [n, amount] : record.cpu) nodes_[n].cpu_residual += amount;
  for (auto [l, amount] : record.bw) links_[l].bw_residual += amount;
  for (NodeId host : record.mapping.node_map) nodes_[host].hosted -= 1;
  for (NodeId n : record.path_nodes) nodes_[n].routing_refcount -= 1;
  for (NodeId host : record.mapping.node_map) settle_power(host);
  for (NodeId n : record.path_nodes) settle_power(n);
  allocations_.erase(it);
}

void SubstrateNetwork::settle_power(NodeId id) {
  SubstrateNode& n = nodes_[id];
  n.routing_enabled = n.routing_refcount > 0;
  if (n.hosted == 0 && n.routing_refcount == 0) n.power_on = false;
}

bool SubstrateNetwork::same_state(const SubstrateNetwork& other) const {
  if (!same_topology(other)) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& x = nodes_[i];
    const auto& y = other.nodes_[i];
    if (x.cpu_residual != y.cpu_residual || x.power_on != y.power_on ||
        x.routing_enabled != y.routing_enabled || x.routing_refcount != y.routing_refcount ||
        x.hosted != y.hosted)
      return false;
  }
  for (std::size_t i = 0; i < links_.size(); ++i)
    if (links_[i].bw_residual != other.links_[i].bw_residual) return false;
  return true;
}

bool SubstrateNetwork::same_topology(const SubstrateNetwork& other) const {
  if (nodes_.size() != other.nodes_.size() || links_.size() != other.links_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& x = nodes_[i];
    const auto& y = other.nodes_[i];
    if (x.cpu_capacity != y.cpu_capacity || x.profile != y.profile || x.x != y.x || x.y != y.y)
      return false;
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& x = links_[i];
    const auto& y = other.links_[i];
    if (x.a != y.a || x.b != y.b || x.bw_capacity != y.bw_capacity) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ResourceView

ResourceView::ResourceView(const SubstrateNetwork& sn)
    : sn_(&sn),
      cpu_used_(sn.node_count(), 0.0),
      bw_used_(sn.link_count(), 0.0),
      hosted_(sn.node_count(), 0),
      relayed_(sn.node_count(), 0) {}

void ResourceView::host(NodeId n, double cpu) {
  cpu_used_[n] += cpu;
  hosted_[n] += 1;
}

void ResourceView::unhost(NodeId n, double cpu) {
  cpu_used_[n] -= cpu;
  hosted_[n] -= 1;
}

void ResourceView::route(const SubstratePath& path, double bw) {
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    bw_used_[*sn_->find_link(path.nodes[i], path.nodes[i + 1])] += bw;
  for (NodeId n : path.nodes) relayed_[n] += 1;
}

void ResourceView::unroute(const SubstratePath& path, double bw) {
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    bw_used_[*sn_->find_link(path.nodes[i], path.nodes[i + 1])] -= bw;
  for (NodeId n : path.nodes) relayed_[n] -= 1;
}

void ResourceView::add_mapping(const VirtualNetwork& vn, const Mapping& m) {
  for (const VirtualNode& v : vn.nodes()) host(m.node_map[v.id], v.cpu_demand);
  for (const VirtualLink& l : vn.links()) route(m.link_map[l.id], l.bw_demand);
}

void ResourceView::remove_mapping(const VirtualNetwork& vn, const Mapping& m) {
  for (const VirtualLink& l : vn.links()) unroute(m.link_map[l.id], l.bw_demand);
  for (const VirtualNode& v : vn.nodes()) unhost(m.node_map[v.id], v.cpu_demand);
}

std::optional<NodeId> ResourceView::overdrawn_node() const {
  for (NodeId n = 0; n < cpu_used_.size(); ++n)
    if (cpu_residual(n) < 0.0) return n;
  return std::nullopt;
}

std::optional<LinkId> ResourceView::overdrawn_link() const {
  for (LinkId l = 0; l < bw_used_.size(); ++l)
    if (bw_residual(l) < 0.0) return l;
  return std::nullopt;
}

bool ResourceView::within_capacity() const { return !overdrawn_node() && !overdrawn_link(); }

bool is_feasible(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m) {
  try {
    check_structure(sn, vn, m);
  } catch (const InvalidMapping&) {
    return false;
  }
  ResourceView view(sn);
  view.add_mapping(vn, m);
  return view.within_capacity();
}

}  // namespace vne
