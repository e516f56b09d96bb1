#include "vne/embedding.hpp"

#include <algorithm>
#include <numeric>

#include "vne/errors.hpp"

namespace vne {

double revenue(const VirtualNetwork& vn) {
  double total = 0.0;
  for (const VirtualNode& n : vn.nodes()) total += n.cpu_demand;
  for (const VirtualLink& l : vn.links()) total += l.bw_demand;
  return total;
}

double embedding_cost(const VirtualNetwork& vn, const Mapping& m) {
  if (m.node_map.size() != vn.node_count() || m.link_map.size() != vn.link_count())
    throw InvalidMapping("mapping does not match the virtual network's shape");
  double total = 0.0;
  for (const VirtualNode& n : vn.nodes()) total += n.cpu_demand;
  for (const VirtualLink& l : vn.links())
    total += l.bw_demand * static_cast<double>(m.link_map[l.id].length());
  return total;
}

std::optional<SubstratePath> shortest_feasible_path(const ResourceView& view, NodeId src,
                                                    NodeId dst, double bw, std::size_t max_hops) {
  const SubstrateNetwork& sn = view.substrate();
  if (src >= sn.node_count() || dst >= sn.node_count())
    throw InvalidMapping("path endpoint out of range");
  if (src == dst) return SubstratePath{};

  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(sn.node_count(), kUnseen);
  auto usable = [&](LinkId l) { return view.bw_residual(l) >= bw; };

  // Breadth-first layers grown from dst until src is reached.
  std::vector<std::vector<NodeId>> layers{{dst}};
  dist[dst] = 0;
  while (dist[src] == kUnseen) {
    if (layers.size() > max_hops) return std::nullopt;
    std::vector<NodeId> next;
    for (NodeId n : layers.back())
      for (LinkId l : sn.incident(n)) {
        NodeId m = sn.link(l).other(n);
        if (dist[m] == kUnseen && usable(l)) {
          dist[m] = layers.size();
          next.push_back(m);
        }
      }
    if (next.empty()) return std::nullopt;
    layers.push_back(std::move(next));
  }

  // Fewest powered-off nodes on any shortest path from each node to dst.
  std::vector<std::size_t> activations(sn.node_count(), kUnseen);
  auto off = [&](NodeId n) -> std::size_t { return view.powered(n) ? 0 : 1; };
  activations[dst] = off(dst);
  for (std::size_t k = 1; k < layers.size(); ++k)
    for (NodeId n : layers[k]) {
      std::size_t best = kUnseen;
      for (LinkId l : sn.incident(n)) {
        NodeId m = sn.link(l).other(n);
        if (dist[m] == k - 1 && usable(l)) best = std::min(best, activations[m]);
      }
      activations[n] = best + off(n);
    }

  SubstratePath path;
  path.nodes.push_back(src);
  NodeId cur = src;
  while (cur != dst) {
    std::size_t want = activations[cur] - off(cur);
    auto pick = static_cast<NodeId>(sn.node_count());
    for (LinkId l : sn.incident(cur)) {
      NodeId m = sn.link(l).other(cur);
      if (dist[m] + 1 == dist[cur] && usable(l) && activations[m] == want) pick = std::min(pick, m);
    }
    path.nodes.push_back(pick);
    cur = pick;
  }
  return path;
}

std::optional<SubstratePath> shortest_feasible_path(const SubstrateNetwork& sn, NodeId src,
                                                    NodeId dst, double bw, std::size_t max_hops) {
  return shortest_feasible_path(ResourceView(sn), src, dst, bw, max_hops);
}

namespace {

NodeId find_root(std::vector<NodeId>& parent, NodeId n) {
  while (parent[n] != n) {
    parent[n] = parent[parent[n]];
    n = parent[n];
  }
  return n;
}

double int_pow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace

double snf(const SubstrateNetwork& sn, std::span<const double> cpu_residual,
           std::span<const double> bw_residual, const FragmentationConfig& cfg) {
  if (cfg.q < 2) throw InvalidSpec("fragmentation exponent q must be at least 2");
  std::vector<NodeId> parent(sn.node_count());
  std::iota(parent.begin(), parent.end(), NodeId{0});
  for (const SubstrateLink& l : sn.links()) {
    if (bw_residual[l.id] < cfg.bw_lower_bound) continue;
    NodeId ra = find_root(parent, l.a);
    NodeId rb = find_root(parent, l.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::vector<double> residual(sn.node_count(), 0.0);
  for (const SubstrateNode& n : sn.nodes()) residual[find_root(parent, n.id)] += cpu_residual[n.id];
  for (const SubstrateLink& l : sn.links()) {
    NodeId ra = find_root(parent, l.a);
    if (ra == find_root(parent, l.b)) residual[ra] += bw_residual[l.id];
  }

  double total = 0.0;
  double powered_sum = 0.0;
  for (NodeId n = 0; n < sn.node_count(); ++n) {
    if (parent[n] != n) continue;
    total += residual[n];
    powered_sum += int_pow(residual[n], cfg.q);
  }
  if (total <= 0.0) return 0.0;
  double value = 1.0 - powered_sum / int_pow(total, cfg.q);
  return std::max(0.0, value);
}

double snf(const SubstrateNetwork& sn, const FragmentationConfig& cfg) {
  std::vector<double> cpu(sn.node_count());
  std::vector<double> bw(sn.link_count());
  for (const SubstrateNode& n : sn.nodes()) cpu[n.id] = n.cpu_residual;
  for (const SubstrateLink& l : sn.links()) bw[l.id] = l.bw_residual;
  return snf(sn, cpu, bw, cfg);
}

ObjectiveVector evaluate_objectives(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                    const Mapping& m, const PowerConfig& pcfg,
                                    const FragmentationConfig& fcfg) {
  check_structure(sn, vn, m);
  ResourceView view(sn);
  view.add_mapping(vn, m);
  if (auto n = view.overdrawn_node()) throw InsufficientCpu(*n);
  if (auto l = view.overdrawn_link()) throw InsufficientBandwidth(*l);

  std::vector<double> cpu(sn.node_count());
  std::vector<double> bw(sn.link_count());
  for (const SubstrateNode& n : sn.nodes()) cpu[n.id] = view.cpu_residual(n.id);
  for (const SubstrateLink& l : sn.links()) bw[l.id] = view.bw_residual(l.id);

  ObjectiveVector out;
  out.cost = embedding_cost(vn, m);
  out.fragmentation = snf(sn, cpu, bw, fcfg);
  out.power = embedding_power(sn, vn, m, pcfg);
  return out;
}

}  // namespace vne
