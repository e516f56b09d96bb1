#include "vne/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "vne/errors.hpp"

namespace vne {

void SubstrateGenSpec::validate() const {
  if (node_count < 1) throw InvalidSpec("substrate needs at least one node");
  if (target_link_count + 1 < node_count)
    throw InvalidSpec("target link count must be at least node count - 1");
  if (target_link_count > node_count * (node_count - 1) / 2)
    throw InvalidSpec("target link count exceeds the number of node pairs");
  if (!(bw_min >= 0.0 && bw_min <= bw_max)) throw InvalidSpec("need 0 <= bw_min <= bw_max");
  if (!(waxman_alpha > 0.0 && waxman_alpha <= 1.0)) throw InvalidSpec("waxman alpha must lie in (0, 1]");
  if (!(waxman_beta > 0.0 && waxman_beta <= 1.0)) throw InvalidSpec("waxman beta must lie in (0, 1]");
  if (node_classes.empty()) throw InvalidSpec("no node classes to draw from");
  for (const auto& c : node_classes)
    if (!(c.cpu_capacity > 0.0)) throw InvalidSpec("node class CPU capacity must be positive");
}

void WorkloadSpec::validate() const {
  if (vn_node_min < 1 || vn_node_min > vn_node_max) throw InvalidSpec("need 1 <= vn_node_min <= vn_node_max");
  if (!(connectivity > 0.0 && connectivity <= 1.0)) throw InvalidSpec("connectivity must lie in (0, 1]");
  if (cpu_choices.empty()) throw InvalidSpec("no CPU choices");
  for (double c : cpu_choices)
    if (!(c > 0.0)) throw InvalidSpec("CPU choices must be positive");
  if (!(bw_min > 0.0 && bw_min <= bw_max)) throw InvalidSpec("need 0 < bw_min <= bw_max");
  if (!(arrival_rate > 0.0)) throw InvalidSpec("arrival rate must be positive");
  if (!(lifetime_min > 0.0 && lifetime_min <= lifetime_max))
    throw InvalidSpec("need 0 < lifetime_min <= lifetime_max");
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

SubstrateNetwork gen_substrate(const SubstrateGenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  const std::size_t n = spec.node_count;

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }

  struct Pair {
    double score;
    double jitter;
    NodeId a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  double longest = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) longest = std::max(longest, std::hypot(xs[i] - xs[j], ys[i] - ys[j]));
  if (longest <= 0.0) longest = 1.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      double score = spec.waxman_beta * std::exp(-d / (spec.waxman_alpha * longest));
      pairs.push_back({score, unit(rng), static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) {
    if (p.score != q.score) return p.score > q.score;
    if (p.jitter != q.jitter) return p.jitter > q.jitter;
    return std::tie(p.a, p.b) < std::tie(q.a, q.b);
  });

  // A maximum-score spanning tree plus the best remaining pairs equals the
  // plain top-score fill whenever that fill is connected, and otherwise swaps
  // the weakest fill edges for the bridges it lacks.
  std::vector<char> chosen(pairs.size(), 0);
  DisjointSets sets(n);
  std::size_t picked = 0;
  for (std::size_t k = 0; k < pairs.size() && picked + 1 < n; ++k)
    if (sets.unite(pairs[k].a, pairs[k].b)) {
      chosen[k] = 1;
      ++picked;
    }
  for (std::size_t k = 0; k < pairs.size() && picked < spec.target_link_count; ++k)
    if (!chosen[k]) {
      chosen[k] = 1;
      ++picked;
    }

  SubstrateNetwork sn;
  std::uniform_int_distribution<std::size_t> klass(0, spec.node_classes.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeClass& c = spec.node_classes[klass(rng)];
    sn.add_node(c.cpu_capacity, c.profile, xs[i], ys[i]);
  }
  std::uniform_real_distribution<double> bw(spec.bw_min, spec.bw_max);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (chosen[k]) sn.add_link(pairs[k].a, pairs[k].b, bw(rng));
  return sn;
}

std::vector<VNRequest> gen_workload(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> size(spec.vn_node_min, spec.vn_node_max);
  std::uniform_int_distribution<std::size_t> cpu_pick(0, spec.cpu_choices.size() - 1);
  std::uniform_real_distribution<double> bw(spec.bw_min, spec.bw_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> gap(spec.arrival_rate / 100.0);
  std::uniform_real_distribution<double> life(spec.lifetime_min, spec.lifetime_max);

  std::vector<VNRequest> out;
  out.reserve(spec.vnr_count);
  double clock = 0.0;
  for (std::size_t r = 0; r < spec.vnr_count; ++r) {
    VNRequest req;
    req.id = r;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) req.vn.add_node(spec.cpu_choices[cpu_pick(rng)]);

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (unit(rng) < spec.connectivity) {
          req.vn.add_link(static_cast<NodeId>(i), static_cast<NodeId>(j), bw(rng));
          sets.unite(i, j);
        }
    // Join each remaining component to a random node already connected to node 0.
    std::vector<std::size_t> joined;
    for (std::size_t i = 0; i < n; ++i)
      if (sets.find(i) == sets.find(0)) joined.push_back(i);
    for (std::size_t i = 1; i < n; ++i) {
      if (sets.find(i) == sets.find(0)) continue;
      std::vector<std::size_t> members;
      std::size_t root = sets.find(i);
      for (std::size_t k = 0; k < n; ++k)
        if (sets.find(k) == root) members.push_back(k);
      std::size_t from = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
      std::size_t to = joined[std::uniform_int_distribution<std::size_t>(0, joined.size() - 1)(rng)];
      req.vn.add_link(static_cast<NodeId>(from), static_cast<NodeId>(to), bw(rng));
      sets.unite(from, to);
      joined.insert(joined.end(), members.begin(), members.end());
    }

    clock += gap(rng);
    req.arrival = clock;
    req.lifetime = life(rng);
    out.push_back(std::move(req));
  }
  return out;
}

}  // namespace vne
