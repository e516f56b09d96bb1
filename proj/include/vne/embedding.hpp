#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>

#include "vne/net_model.hpp"
#include "vne/power_model.hpp"

namespace vne {

/// The three minimized objectives of a candidate embedding.
struct ObjectiveVector {
  double cost = 0.0;
  double fragmentation = 0.0;
  double power = 0.0;

  std::array<double, 3> values() const { return {cost, fragmentation, power}; }
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct FragmentationConfig {
  int q = 2;
  double bw_lower_bound = 1.0;
  /// Kept for the length-bounded fragment variant; not used by snf().
  std::size_t max_path_len = 2;
};

inline constexpr std::size_t kUnboundedHops = std::numeric_limits<std::size_t>::max();

/// Sum of CPU and bandwidth demands of the VN.
double revenue(const VirtualNetwork& vn);

/// Sum of CPU demands plus bandwidth demand times path length. Throws
/// InvalidMapping when m does not match the VN's shape.
double embedding_cost(const VirtualNetwork& vn, const Mapping& m);

/// Minimum-hop loop-free path whose links all have at least `bw` residual in
/// the view. Equal-hop candidates are ranked by the number of powered-off nodes
/// they would switch on, then lexicographically. src == dst yields the empty
/// path; std::nullopt means no path within max_hops.
std::optional<SubstratePath> shortest_feasible_path(const ResourceView& view, NodeId src,
                                                    NodeId dst, double bw, std::size_t max_hops);
std::optional<SubstratePath> shortest_feasible_path(const SubstrateNetwork& sn, NodeId src,
                                                    NodeId dst, double bw, std::size_t max_hops);

/// Fragmentation of the given residual state. Fragments are the connected
/// components over links with residual >= cfg.bw_lower_bound; each weighs its
/// nodes' CPU residual plus the residual of links inside it. Result is
/// 1 - sum(R^q) / (sum R)^q, or 0 when nothing is left.
double snf(const SubstrateNetwork& sn, std::span<const double> cpu_residual,
           std::span<const double> bw_residual, const FragmentationConfig& cfg);
double snf(const SubstrateNetwork& sn, const FragmentationConfig& cfg);

/// (cost, fragmentation after a hypothetical apply, marginal power). Does not
/// mutate sn. Throws InvalidMapping for structural errors, InsufficientCpu or
/// InsufficientBandwidth when m does not fit.
ObjectiveVector evaluate_objectives(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                    const Mapping& m, const PowerConfig& pcfg,
                                    const FragmentationConfig& fcfg);

}  // namespace vne
