#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/net_model.hpp"
#include "vne/pareto.hpp"
#include "vne/power_model.hpp"

namespace vne {

struct SolverParams {
  std::size_t iterations_max = 5;
  std::size_t swarm_size = 10;
  std::size_t ea_max_size = 20;
  std::size_t hops_max = 2;
  std::size_t max_backtrack = 6;  // absolute budget per VNR
  double w = 0.4;
  double c1 = 1.0;
  double c2 = 1.0;
  std::optional<double> pro_mut;  // unset: 1 / |N_v|
  std::uint64_t seed = 1;
  unsigned threads = 1;

  /// Throws InvalidSpec.
  void validate() const;
};

/// One substrate path per virtual node. An empty path means "stay".
struct Velocity {
  std::vector<SubstratePath> paths;
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

struct Particle {
  Mapping position;
  Velocity velocity;
  Mapping pbest;
  ObjectiveVector pbest_objectives;
  ObjectiveVector objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
};

struct ArchiveEntry {
  Mapping position;
  ObjectiveVector objectives;
};

/// Bounded set of mutually non-dominated solutions.
class ExternalArchive {
 public:
  explicit ExternalArchive(std::size_t capacity) : capacity_(capacity) {}

  std::span<const ArchiveEntry> members() const { return members_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  /// Merges newcomers: union, drop duplicate positions, rank by front then
  /// descending crowding distance, keep the first `capacity`, then drop
  /// anything dominated by a retained member.
  void absorb(std::span<const ArchiveEntry> newcomers);

 private:
  std::size_t capacity_;
  std::vector<ArchiveEntry> members_;
};

ExternalArchive update_archive(const ExternalArchive& archive, std::span<const Particle> swarm);

/// Everything the particle operators read. The substrate is never mutated.
struct SearchContext {
  const SubstrateNetwork& sn;
  const VirtualNetwork& vn;
  const PowerConfig& power;
  const FragmentationConfig& fragmentation;
  std::size_t hops_max;
};

/// Depth-first placement pinned at root_host; candidates ranked by incremental power.
std::optional<Mapping> create_new_particle(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                           std::span<const NodeId> order, NodeId root_host,
                                           std::size_t hops, std::size_t max_backtrack,
                                           const PowerConfig& power);

/// Distinct feasible positions built from the root's candidate hosts with the
/// hop limit raised from 0 to hops_max. May return fewer than swarm_size, or none.
std::vector<Particle> init_swarm(const SearchContext& ctx, const SolverParams& params);

/// Per dimension, the shortest hop path from b's host to a's host, capacities ignored.
Velocity subtract(const Mapping& a, const Mapping& b, const SubstrateNetwork& sn);

/// Per dimension, picks the component of term k with probability weight_k.
Velocity add(std::span<const std::pair<double, Velocity>> terms, std::mt19937_64& rng);

/// Moves each virtual node one step along its velocity path and re-routes the
/// affected links. Returns p itself when no feasible variant is found.
Mapping multiply(const Mapping& p, const Velocity& v, const SearchContext& ctx);

/// Velocity and position update towards pbest and the leader.
void step_particle(Particle& particle, const Mapping& leader, const SolverParams& params,
                   const SearchContext& ctx, std::mt19937_64& rng);

/// Each dimension moves to a random other host with probability pro_mut;
/// links are re-routed without a hop limit and infeasible moves are undone.
void mutate(Particle& particle, double pro_mut, const SearchContext& ctx, std::mt19937_64& rng);

/// Hop distances over the whole substrate, computed once per solve.
class HopDistances {
 public:
  explicit HopDistances(const SubstrateNetwork& sn);
  static constexpr std::uint32_t kUnreachable = 0xffffffffu;
  std::uint32_t operator()(NodeId from, NodeId to) const { return table_[from * size_ + to]; }

 private:
  std::size_t size_;
  std::vector<std::uint32_t> table_;
};

/// Round-robin local search. For each virtual node, the closest host to all of
/// its neighbors' hosts is tried and kept when the result dominates the current
/// objectives. Stops after a pass without improvement.
void improve_local(Particle& particle, const SearchContext& ctx, const HopDistances& distances);

struct SolveResult {
  std::optional<Mapping> mapping;
  std::optional<ObjectiveVector> objectives;
  std::vector<ArchiveEntry> front;  // archive at termination
};

/// Memetic MOPSO embedding. Deterministic for a given seed and VNR id,
/// independent of params.threads.
SolveResult solve(const SubstrateNetwork& sn, const VNRequest& vnr, const SolverParams& params,
                  const PowerConfig& power, const FragmentationConfig& fragmentation);

/// Index of the member minimizing the sum of min-max normalized objectives,
/// ties broken by cost then power.
std::size_t select_compromise(std::span<const ArchiveEntry> front);

}  // namespace vne
