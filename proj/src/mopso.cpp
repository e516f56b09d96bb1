#include "vne/mopso.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <variant>

#include "vne/errors.hpp"
#include "vne/placement.hpp"

namespace vne {

void SolverParams::validate() const {
  if (iterations_max < 1) throw InvalidSpec("iterations_max must be at least 1");
  if (swarm_size < 1) throw InvalidSpec("swarm_size must be at least 1");
  if (ea_max_size < 1) throw InvalidSpec("ea_max_size must be at least 1");
  if (!(w >= 0.0 && c1 >= 0.0 && c2 >= 0.0)) throw InvalidSpec("w, c1, c2 must be non-negative");
  if (pro_mut && !(*pro_mut >= 0.0 && *pro_mut <= 1.0))
    throw InvalidSpec("pro_mut must lie in [0, 1]");
}

namespace {

ObjectivePoint to_point(const ObjectiveVector& v) {
  auto a = v.values();
  return {a.begin(), a.end()};
}

/// Independent stream per (seed, VNR, particle, round).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t vnr, std::uint64_t particle,
                            std::uint64_t round) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(vnr), hi(vnr), lo(particle), hi(particle), lo(round), hi(round)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

constexpr std::uint64_t kLeaderStream = std::numeric_limits<std::uint64_t>::max();

template <typename Fn>
void for_each_particle(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ObjectiveVector evaluate(const SearchContext& ctx, const Mapping& m) {
  return evaluate_objectives(ctx.sn, ctx.vn, m, ctx.power, ctx.fragmentation);
}

}  // namespace

// ---------------------------------------------------------------------------
// Archive

void ExternalArchive::absorb(std::span<const ArchiveEntry> newcomers) {
  std::vector<ArchiveEntry> pool;
  pool.reserve(members_.size() + newcomers.size());
  auto add_unique = [&](const ArchiveEntry& e) {
    for (const auto& existing : pool)
      if (existing.position == e.position) return;
    pool.push_back(e);
  };
  for (const auto& e : members_) add_unique(e);
  for (const auto& e : newcomers) add_unique(e);

  std::vector<ObjectivePoint> points;
  points.reserve(pool.size());
  for (const auto& e : pool) points.push_back(to_point(e.objectives));
  std::vector<std::size_t> order = rank_by_front_and_crowding(points);
  if (order.size() > capacity_) order.resize(capacity_);

  std::vector<ArchiveEntry> kept;
  for (std::size_t i : order) {
    bool dominated = false;
    for (std::size_t j : order)
      if (dominates(points[j], points[i])) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(pool[i]);
  }
  members_ = std::move(kept);
}

ExternalArchive update_archive(const ExternalArchive& archive, std::span<const Particle> swarm) {
  std::vector<ArchiveEntry> entries;
  entries.reserve(swarm.size());
  for (const Particle& p : swarm) entries.push_back({p.position, p.objectives});
  ExternalArchive next = archive;
  next.absorb(entries);
  return next;
}

// ---------------------------------------------------------------------------
// Initialization

std::optional<Mapping> create_new_particle(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                           std::span<const NodeId> order, NodeId root_host,
                                           std::size_t hops, std::size_t max_backtrack,
                                           const PowerConfig& power) {
  CandidateRanking rank = [&power](const ResourceView& view, double cpu) {
    return rank_by_power(view, cpu, power);
  };
  return backtracking_embed(sn, vn, order, root_host, rank, hops, max_backtrack);
}

std::vector<Particle> init_swarm(const SearchContext& ctx, const SolverParams& params) {
  std::vector<Particle> swarm;
  if (ctx.vn.node_count() == 0) return swarm;
  const std::vector<NodeId> order = order_virtual_nodes(ctx.vn);
  const double root_demand = ctx.vn.node(order.front()).cpu_demand;
  const std::vector<NodeId> candidates = rank_by_power(ResourceView(ctx.sn), root_demand, ctx.power);

  std::vector<Mapping> positions;
  for (std::size_t hops = 0; hops <= params.hops_max && positions.size() < params.swarm_size; ++hops) {
    for (NodeId host : candidates) {
      auto pos = create_new_particle(ctx.sn, ctx.vn, order, host, hops, params.max_backtrack, ctx.power);
      if (pos && std::find(positions.begin(), positions.end(), *pos) == positions.end())
        positions.push_back(std::move(*pos));
      if (positions.size() >= params.swarm_size) break;
    }
  }

  swarm.reserve(positions.size());
  for (Mapping& pos : positions) {
    Particle p;
    p.objectives = evaluate(ctx, pos);
    p.velocity.paths.assign(ctx.vn.node_count(), {});
    p.pbest = pos;
    p.pbest_objectives = p.objectives;
    p.position = std::move(pos);
    swarm.push_back(std::move(p));
  }
  return swarm;
}

// ---------------------------------------------------------------------------
// Particle algebra

Velocity subtract(const Mapping& a, const Mapping& b, const SubstrateNetwork& sn) {
  if (a.node_map.size() != b.node_map.size())
    throw InvalidMapping("positions of different dimension");
  Velocity v;
  v.paths.resize(a.node_map.size());
  for (std::size_t m = 0; m < a.node_map.size(); ++m) {
    auto path = shortest_feasible_path(sn, b.node_map[m], a.node_map[m], 0.0, kUnboundedHops);
    if (path) v.paths[m] = std::move(*path);
  }
  return v;
}

Velocity add(std::span<const std::pair<double, Velocity>> terms, std::mt19937_64& rng) {
  if (terms.empty()) return {};
  const std::size_t dims = terms.front().second.paths.size();
  for (const auto& [weight, vel] : terms) {
    if (vel.paths.size() != dims) throw InvalidMapping("velocities of different dimension");
    if (!(weight >= 0.0)) throw InvalidSpec("velocity weights must be non-negative");
  }
  Velocity out;
  out.paths.resize(dims);
  for (std::size_t m = 0; m < dims; ++m) {
    double u = uniform01(rng);
    std::size_t pick = terms.size() - 1;
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
      cumulative += terms[k].first;
      if (u < cumulative) {
        pick = k;
        break;
      }
    }
    // A zero-weight tail term is never chosen.
    while (pick > 0 && terms[pick].first <= 0.0) --pick;
    out.paths[m] = terms[pick].second.paths[m];
  }
  return out;
}

namespace {

struct AttemptFailure {
  std::optional<NodeId> overdrawn_host;
  std::optional<LinkId> unroutable_link;
};

/// Builds p with the moved dimensions relocated to `target` and their links
/// re-routed; reports what blocked it otherwise.
std::variant<Mapping, AttemptFailure> try_moves(const Mapping& p, const std::vector<NodeId>& target,
                                                const std::vector<char>& moved,
                                                const SearchContext& ctx) {
  const VirtualNetwork& vn = ctx.vn;
  Mapping q;
  q.node_map.resize(vn.node_count());
  q.link_map.resize(vn.link_count());
  ResourceView view(ctx.sn);
  for (const VirtualNode& v : vn.nodes()) {
    q.node_map[v.id] = moved[v.id] ? target[v.id] : p.node_map[v.id];
    view.host(q.node_map[v.id], v.cpu_demand);
  }
  if (auto n = view.overdrawn_node()) return AttemptFailure{*n, std::nullopt};

  for (const VirtualLink& l : vn.links())
    if (!moved[l.a] && !moved[l.b]) {
      q.link_map[l.id] = p.link_map[l.id];
      view.route(q.link_map[l.id], l.bw_demand);
    }
  for (const VirtualLink& l : vn.links()) {
    if (!moved[l.a] && !moved[l.b]) continue;
    auto path = shortest_feasible_path(view, q.node_map[l.a], q.node_map[l.b], l.bw_demand, ctx.hops_max);
    if (!path) return AttemptFailure{std::nullopt, l.id};
    q.link_map[l.id] = std::move(*path);
    view.route(q.link_map[l.id], l.bw_demand);
  }
  return q;
}

}  // namespace

Mapping multiply(const Mapping& p, const Velocity& v, const SearchContext& ctx) {
  const VirtualNetwork& vn = ctx.vn;
  const std::size_t n = vn.node_count();
  if (v.paths.size() != n || p.node_map.size() != n)
    throw InvalidMapping("position and velocity dimension mismatch");

  ResourceView cpu(ctx.sn);
  for (const VirtualNode& node : vn.nodes()) cpu.host(p.node_map[node.id], node.cpu_demand);

  std::vector<NodeId> target = p.node_map;
  std::vector<char> moved(n, 0);
  bool any = false;
  for (NodeId m = 0; m < n; ++m) {
    const auto& path = v.paths[m].nodes;
    if (path.empty()) continue;
    const NodeId host = target[m];
    const double demand = vn.node(m).cpu_demand;
    auto at = std::find(path.begin(), path.end(), host);
    auto from = at == path.end() ? path.begin() : at + 1;
    for (auto it = from; it != path.end(); ++it) {
      if (*it == host || !cpu.fits_cpu(*it, demand)) continue;
      cpu.unhost(host, demand);
      cpu.host(*it, demand);
      target[m] = *it;
      moved[m] = 1;
      any = true;
      break;
    }
  }
  if (!any) return p;

  while (true) {
    auto attempt = try_moves(p, target, moved, ctx);
    if (auto* q = std::get_if<Mapping>(&attempt)) return std::move(*q);
    const auto& failure = std::get<AttemptFailure>(attempt);
    bool reverted = false;
    if (failure.overdrawn_host) {
      for (NodeId m = 0; m < n; ++m)
        if (moved[m] && target[m] == *failure.overdrawn_host) {
          moved[m] = 0;
          reverted = true;
        }
    } else {
      const VirtualLink& l = vn.link(*failure.unroutable_link);
      for (NodeId end : {l.a, l.b})
        if (moved[end]) {
          moved[end] = 0;
          reverted = true;
        }
    }
    if (!reverted || std::none_of(moved.begin(), moved.end(), [](char c) { return c != 0; }))
      return p;
  }
}

void step_particle(Particle& particle, const Mapping& leader, const SolverParams& params,
                   const SearchContext& ctx, std::mt19937_64& rng) {
  const double r1 = uniform01(rng);
  const double r2 = uniform01(rng);
  double weights[3] = {params.w, params.c1 * r1, params.c2 * r2};
  const double total = weights[0] + weights[1] + weights[2];
  if (total > 0.0) {
    for (double& x : weights) x /= total;
  } else {
    weights[0] = 1.0;
  }

  if (particle.velocity.paths.size() != ctx.vn.node_count())
    particle.velocity.paths.assign(ctx.vn.node_count(), {});
  std::pair<double, Velocity> terms[3] = {
      {weights[0], particle.velocity},
      {weights[1], subtract(particle.pbest, particle.position, ctx.sn)},
      {weights[2], subtract(leader, particle.position, ctx.sn)},
  };
  particle.velocity = add(terms, rng);
  particle.position = multiply(particle.position, particle.velocity, ctx);
}

void mutate(Particle& particle, double pro_mut, const SearchContext& ctx, std::mt19937_64& rng) {
  MappingWorkspace ws(ctx.sn, ctx.vn, particle.position);
  for (NodeId m = 0; m < ctx.vn.node_count(); ++m) {
    if (uniform01(rng) >= pro_mut) continue;
    std::vector<NodeId> options;
    for (const SubstrateNode& n : ctx.sn.nodes())
      if (n.id != ws.mapping().node_map[m] && ws.can_host(m, n.id)) options.push_back(n.id);
    if (options.empty()) continue;
    NodeId pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    ws.relocate(m, pick, kUnboundedHops);
  }
  particle.position = ws.mapping();
}

// ---------------------------------------------------------------------------
// Local search

HopDistances::HopDistances(const SubstrateNetwork& sn)
    : size_(sn.node_count()), table_(sn.node_count() * sn.node_count(), kUnreachable) {
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < size_; ++s) {
    std::uint32_t* row = &table_[s * size_];
    row[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId u = queue[head];
      for (LinkId l : sn.incident(u)) {
        NodeId w = sn.link(l).other(u);
        if (row[w] == kUnreachable) {
          row[w] = row[u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
}

void improve_local(Particle& particle, const SearchContext& ctx, const HopDistances& distances) {
  const VirtualNetwork& vn = ctx.vn;
  MappingWorkspace ws(ctx.sn, vn, particle.position);
  ObjectiveVector current = evaluate(ctx, ws.mapping());

  bool improved = true;
  while (improved) {
    improved = false;
    for (NodeId v = 0; v < vn.node_count(); ++v) {
      std::vector<NodeId> anchors;
      for (LinkId l : vn.incident(v)) {
        NodeId host = ws.mapping().node_map[vn.link(l).other(v)];
        if (std::find(anchors.begin(), anchors.end(), host) == anchors.end()) anchors.push_back(host);
      }
      if (anchors.empty()) continue;

      // Frontiers grown one hop at a time from every anchor first meet at the
      // nodes minimizing the largest anchor distance.
      NodeId best = static_cast<NodeId>(ctx.sn.node_count());
      std::uint64_t best_max = std::numeric_limits<std::uint64_t>::max();
      std::uint64_t best_sum = best_max;
      for (const SubstrateNode& n : ctx.sn.nodes()) {
        if (!ws.can_host(v, n.id)) continue;
        std::uint64_t far = 0;
        std::uint64_t sum = 0;
        bool reachable = true;
        for (NodeId a : anchors) {
          std::uint32_t d = distances(a, n.id);
          if (d == HopDistances::kUnreachable) {
            reachable = false;
            break;
          }
          far = std::max<std::uint64_t>(far, d);
          sum += d;
        }
        if (!reachable) continue;
        if (far < best_max || (far == best_max && sum < best_sum)) {
          best = n.id;
          best_max = far;
          best_sum = sum;
        }
      }
      if (best == ctx.sn.node_count() || best == ws.mapping().node_map[v]) continue;

      MappingWorkspace trial = ws;
      if (!trial.relocate(v, best, ctx.hops_max) || trial.mapping().node_map[v] != best) continue;
      ObjectiveVector candidate = evaluate(ctx, trial.mapping());
      if (dominates(candidate.values(), current.values())) {
        ws = std::move(trial);
        current = candidate;
        improved = true;
      }
    }
  }
  particle.position = ws.mapping();
  particle.objectives = current;
}

// ---------------------------------------------------------------------------
// Driver

std::size_t select_compromise(std::span<const ArchiveEntry> front) {
  if (front.empty()) throw InvalidSpec("cannot select from an empty front");
  std::array<double, 3> lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& e : front) {
    auto v = e.objectives.values();
    for (std::size_t k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  auto score = [&](const ObjectiveVector& o) {
    auto v = o.values();
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
      if (hi[k] > lo[k]) s += (v[k] - lo[k]) / (hi[k] - lo[k]);
    return s;
  };
  std::size_t best = 0;
  double best_score = score(front[0].objectives);
  for (std::size_t i = 1; i < front.size(); ++i) {
    double s = score(front[i].objectives);
    const auto& a = front[i].objectives;
    const auto& b = front[best].objectives;
    if (s < best_score || (s == best_score && (a.cost < b.cost || (a.cost == b.cost && a.power < b.power)))) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

namespace {

void assign_ranks(std::vector<Particle>& swarm) {
  std::vector<ObjectivePoint> points;
  points.reserve(swarm.size());
  for (const auto& p : swarm) points.push_back(to_point(p.objectives));
  auto fronts = fast_nondominated_sort(points);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<ObjectivePoint> members;
    for (std::size_t i : fronts[r]) members.push_back(points[i]);
    auto crowd = crowding_distance(members);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      swarm[fronts[r][k]].rank = r;
      swarm[fronts[r][k]].crowding = crowd[k];
    }
  }
}

bool has_room(const SubstrateNetwork& sn, const VirtualNetwork& vn) {
  double demand = 0.0;
  double largest = 0.0;
  for (const VirtualNode& v : vn.nodes()) {
    demand += v.cpu_demand;
    largest = std::max(largest, v.cpu_demand);
  }
  double residual = 0.0;
  double roomiest = 0.0;
  for (const SubstrateNode& n : sn.nodes()) {
    residual += n.cpu_residual;
    roomiest = std::max(roomiest, n.cpu_residual);
  }
  return demand <= residual && largest <= roomiest;
}

}  // namespace

SolveResult solve(const SubstrateNetwork& sn, const VNRequest& vnr, const SolverParams& params,
                  const PowerConfig& power, const FragmentationConfig& fragmentation) {
  params.validate();
  const VirtualNetwork& vn = vnr.vn;
  SolveResult result;
  if (vn.node_count() == 0) {
    result.mapping = Mapping{};
    result.objectives = evaluate_objectives(sn, vn, *result.mapping, power, fragmentation);
    return result;
  }
  if (!vn.connected() || !has_room(sn, vn)) return result;

  const SearchContext ctx{sn, vn, power, fragmentation, params.hops_max};
  std::vector<Particle> swarm = init_swarm(ctx, params);
  if (swarm.empty()) return result;

  const HopDistances distances(sn);
  const double pro_mut = params.pro_mut.value_or(1.0 / static_cast<double>(vn.node_count()));

  for_each_particle(swarm.size(), params.threads, [&](std::size_t i) {
    auto rng = make_stream(params.seed, vnr.id, i, 0);
    Particle& p = swarm[i];
    improve_local(p, ctx, distances);
    for (NodeId m = 0; m < vn.node_count(); ++m) {
      NodeId goal = static_cast<NodeId>(
          std::uniform_int_distribution<std::size_t>(0, sn.node_count() - 1)(rng));
      auto path = shortest_feasible_path(sn, p.position.node_map[m], goal, 0.0, kUnboundedHops);
      p.velocity.paths[m] = path ? std::move(*path) : SubstratePath{};
    }
    p.pbest = p.position;
    p.pbest_objectives = p.objectives;
  });
  assign_ranks(swarm);

  ExternalArchive archive(params.ea_max_size);
  archive = update_archive(archive, swarm);

  for (std::size_t round = 1; round <= params.iterations_max; ++round) {
    auto leader_rng = make_stream(params.seed, vnr.id, kLeaderStream, round);
    std::vector<Mapping> leaders;
    leaders.reserve(swarm.size());
    std::uniform_int_distribution<std::size_t> pick(0, archive.size() - 1);
    for (std::size_t i = 0; i < swarm.size(); ++i)
      leaders.push_back(archive.members()[pick(leader_rng)].position);

    for_each_particle(swarm.size(), params.threads, [&](std::size_t i) {
      auto rng = make_stream(params.seed, vnr.id, i, round);
      Particle& p = swarm[i];
      step_particle(p, leaders[i], params, ctx, rng);
      mutate(p, pro_mut, ctx, rng);
      improve_local(p, ctx, distances);
      auto now = p.objectives.values();
      auto best = p.pbest_objectives.values();
      bool replace = dominates(now, best) || (!dominates(best, now) && uniform01(rng) < 0.5);
      if (replace) {
        p.pbest = p.position;
        p.pbest_objectives = p.objectives;
      }
    });
    assign_ranks(swarm);
    archive = update_archive(archive, swarm);
  }

  result.front.assign(archive.members().begin(), archive.members().end());
  const std::size_t chosen = select_compromise(result.front);
  result.mapping = result.front[chosen].position;
  result.objectives = result.front[chosen].objectives;
  return result;
}

}  // namespace vne
