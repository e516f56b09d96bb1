#pragma once

// Reference implementations used to cross-check the library. They share no
// code with the code under test beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "vne/net_model.hpp"
#include "vne/power_model.hpp"

namespace oracle {

using vne::LinkId;
using vne::Mapping;
using vne::NodeId;
using vne::SubstrateNetwork;
using vne::SubstratePath;
using vne::VirtualNetwork;

inline constexpr std::size_t kNoPath = std::numeric_limits<std::size_t>::max();

/// Hop distance src -> dst using only links with residual >= bw.
inline std::size_t hop_distance(const SubstrateNetwork& sn, NodeId src, NodeId dst, double bw) {
  std::vector<std::size_t> dist(sn.node_count(), kNoPath);
  std::deque<NodeId> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (const auto& l : sn.links()) {
      if (l.bw_residual < bw || (l.a != u && l.b != u)) continue;
      NodeId w = l.a == u ? l.b : l.a;
      if (dist[w] == kNoPath) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist[dst];
}

/// Every loop-free path from src to dst with at most max_hops links, in any order.
inline std::vector<SubstratePath> simple_paths(const SubstrateNetwork& sn, NodeId src, NodeId dst,
                                               std::size_t max_hops) {
  std::vector<SubstratePath> out;
  if (src == dst) {
    out.push_back({});
    return out;
  }
  std::vector<NodeId> stack{src};
  std::function<void()> walk = [&] {
    NodeId u = stack.back();
    if (u == dst) {
      out.push_back({stack});
      return;
    }
    if (stack.size() - 1 == max_hops) return;
    for (const auto& l : sn.links()) {
      if (l.a != u && l.b != u) continue;
      NodeId w = l.a == u ? l.b : l.a;
      if (std::find(stack.begin(), stack.end(), w) != stack.end()) continue;
      stack.push_back(w);
      walk();
      stack.pop_back();
    }
  };
  walk();
  return out;
}

inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) better = true;
  }
  return better;
}

/// Fronts by repeatedly peeling the non-dominated remainder. Each front sorted.
inline std::vector<std::vector<std::size_t>> peel_fronts(const std::vector<std::vector<double>>& pts) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> left(pts.size());
  std::iota(left.begin(), left.end(), std::size_t{0});
  while (!left.empty()) {
    std::vector<std::size_t> front, rest;
    for (std::size_t i : left) {
      bool beaten = false;
      for (std::size_t j : left)
        if (j != i && dominates(pts[j], pts[i])) beaten = true;
      (beaten ? rest : front).push_back(i);
    }
    fronts.push_back(front);
    left = rest;
  }
  return fronts;
}

/// Textbook crowding distance, written with explicit neighbor lookup.
inline std::vector<double> crowding(const std::vector<std::vector<double>>& front) {
  const std::size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) return std::vector<double>(n, inf);
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 0; k < front[0].size(); ++k) {
    std::vector<std::pair<double, std::size_t>> sorted;
    for (std::size_t i = 0; i < n; ++i) sorted.emplace_back(front[i][k], i);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double lo = sorted.front().first, hi = sorted.back().first;
    d[sorted.front().second] = inf;
    d[sorted.back().second] = inf;
    for (std::size_t r = 1; r + 1 < n; ++r)
      if (hi > lo) d[sorted[r].second] += (sorted[r + 1].first - sorted[r - 1].first) / (hi - lo);
  }
  return d;
}

/// Fragmentation from scratch: flood fill over links with residual >= lower bound.
inline double snf(const SubstrateNetwork& sn, double bw_lower_bound, int q) {
  const std::size_t n = sn.node_count();
  std::vector<int> comp(n, -1);
  int count = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<NodeId> todo{s};
    comp[s] = count;
    while (!todo.empty()) {
      NodeId u = todo.back();
      todo.pop_back();
      for (const auto& l : sn.links()) {
        if (l.bw_residual < bw_lower_bound) continue;
        NodeId w;
        if (l.a == u) w = l.b;
        else if (l.b == u) w = l.a;
        else continue;
        if (comp[w] < 0) {
          comp[w] = count;
          todo.push_back(w);
        }
      }
    }
    ++count;
  }
  std::vector<double> residual(count, 0.0);
  for (NodeId v = 0; v < n; ++v) residual[comp[v]] += sn.node(v).cpu_residual;
  for (const auto& l : sn.links())
    if (comp[l.a] == comp[l.b]) residual[comp[l.a]] += l.bw_residual;
  double total = 0.0, powered = 0.0;
  for (double r : residual) {
    total += r;
    powered += std::pow(r, q);
  }
  return total > 0.0 ? 1.0 - powered / std::pow(total, q) : 0.0;
}

/// Independent P_S fold over the nodes.
inline double network_power(const SubstrateNetwork& sn, const vne::PowerConfig& cfg) {
  double total = 0.0;
  for (const auto& n : sn.nodes()) {
    if (!n.power_on) continue;
    const auto& p = cfg.profiles.at(n.profile.value);
    double u = (n.cpu_capacity - n.cpu_residual) / n.cpu_capacity;
    total += p.p_idle + (p.p_max - p.p_idle) * u + (n.routing_enabled ? p.p_routing : 0.0);
  }
  return total;
}

inline double cost(const VirtualNetwork& vn, const Mapping& m) {
  double c = 0.0;
  for (const auto& v : vn.nodes()) c += v.cpu_demand;
  for (const auto& l : vn.links()) c += l.bw_demand * static_cast<double>(m.link_map[l.id].length());
  return c;
}

/// (cost, SNF after, power delta) computed by applying the mapping to a copy.
inline std::vector<double> objectives(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m,
                                      const vne::PowerConfig& power, double bw_lower_bound, int q) {
  SubstrateNetwork after = sn;
  vne::VNRequest probe;
  probe.id = std::numeric_limits<vne::VnrId>::max();
  probe.vn = vn;
  after.apply_mapping(probe, m);
  return {oracle::cost(vn, m), oracle::snf(after, bw_lower_bound, q), oracle::network_power(after, power) - oracle::network_power(sn, power)};
}

/// Capacity check from the raw mapping, summing co-located and shared demands.
inline bool fits(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m) {
  std::map<NodeId, double> cpu;
  std::map<LinkId, double> bw;
  for (const auto& v : vn.nodes()) cpu[m.node_map[v.id]] += v.cpu_demand;
  for (const auto& l : vn.links()) {
    const auto& p = m.link_map[l.id].nodes;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) bw[*sn.find_link(p[i], p[i + 1])] += l.bw_demand;
  }
  for (auto [n, c] : cpu)
    if (c > sn.node(n).cpu_residual) return false;
  for (auto [l, b] : bw)
    if (b > sn.link(l).bw_residual) return false;
  return true;
}

/// Every feasible mapping whose paths have at most max_hops links.
inline std::vector<Mapping> all_feasible_mappings(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                                  std::size_t max_hops) {
  std::vector<Mapping> out;
  const std::size_t nv = vn.node_count();
  const std::size_t ns = sn.node_count();
  std::vector<NodeId> hosts(nv, 0);
  while (true) {
    Mapping m;
    m.node_map = hosts;
    m.link_map.assign(vn.link_count(), {});
    std::vector<std::vector<SubstratePath>> options;
    for (const auto& l : vn.links()) options.push_back(simple_paths(sn, hosts[l.a], hosts[l.b], max_hops));
    std::vector<std::size_t> pick(options.size(), 0);
    bool any = std::all_of(options.begin(), options.end(), [](const auto& o) { return !o.empty(); });
    while (any) {
      for (std::size_t i = 0; i < pick.size(); ++i) m.link_map[i] = options[i][pick[i]];
      if (fits(sn, vn, m)) out.push_back(m);
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    std::size_t k = 0;
    while (k < nv && ++hosts[k] == ns) hosts[k++] = 0;
    if (k == nv) break;
  }
  return out;
}

/// Connected random substrate: a random spanning tree plus `extra` random links.
inline SubstrateNetwork random_substrate(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                         double cpu_lo, double cpu_hi, double bw_lo, double bw_hi) {
  SubstrateNetwork sn;
  std::uniform_real_distribution<double> cpu(cpu_lo, cpu_hi), bw(bw_lo, bw_hi);
  std::uniform_int_distribution<int> profile(0, 1);
  for (std::size_t i = 0; i < n; ++i) sn.add_node(vne::quantize(cpu(rng)), vne::ProfileId{static_cast<std::uint16_t>(profile(rng))});
  for (NodeId i = 1; i < n; ++i) {
    NodeId parent = std::uniform_int_distribution<NodeId>(0, i - 1)(rng);
    sn.add_link(parent, i, vne::quantize(bw(rng)));
  }
  std::size_t tries = 0;
  while (extra > 0 && tries++ < 1000) {
    NodeId a = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng);
    NodeId b = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng);
    if (a == b || sn.find_link(a, b)) continue;
    sn.add_link(a, b, vne::quantize(bw(rng)));
    --extra;
  }
  return sn;
}

/// Connected random VN: random tree plus links with probability p_extra.
inline VirtualNetwork random_vn(std::mt19937_64& rng, std::size_t n, double cpu_lo, double cpu_hi,
                                double bw_lo, double bw_hi, double p_extra) {
  VirtualNetwork vn;
  std::uniform_real_distribution<double> cpu(cpu_lo, cpu_hi), bw(bw_lo, bw_hi), coin(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) vn.add_node(cpu(rng));
  std::set<std::pair<NodeId, NodeId>> have;
  for (NodeId i = 1; i < n; ++i) {
    NodeId parent = std::uniform_int_distribution<NodeId>(0, i - 1)(rng);
    vn.add_link(parent, i, bw(rng));
    have.insert({parent, i});
  }
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (!have.count({a, b}) && coin(rng) < p_extra) vn.add_link(a, b, bw(rng));
  return vn;
}

}  // namespace oracle
