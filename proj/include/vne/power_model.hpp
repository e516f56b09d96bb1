#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vne/net_model.hpp"

namespace vne {

/// Linear server power curve plus a constant-draw routing card.
struct ServerProfile {
  std::string name;
  double p_idle = 0.0;     // W at zero utilization
  double p_max = 0.0;      // W at full utilization
  double p_routing = 0.0;  // W while the routing card is enabled
};

struct PowerConfig {
  std::vector<ServerProfile> profiles;

  /// Throws UnknownProfile.
  const ServerProfile& profile(ProfileId id) const;
  std::optional<ProfileId> find(std::string_view name) const;
  std::vector<std::string> names() const;
  /// Throws InvalidSpec when empty or when a profile breaks 0 <= p_idle <= p_max, p_routing >= 0.
  void validate() const;

  /// HP ProLiant ML110 G4 / G5 SPECpower_ssj2008 idle and 100% load figures,
  /// routing card at 10 W.
  static PowerConfig defaults();
};

/// Reads the key-value profile file:
///
///   # comment
///   [profile]
///   name = ML110G4
///   p_idle_watts = 86
///   p_max_watts = 117
///   p_routing_watts = 10
///
/// Throws ParseError or IoError.
PowerConfig load_power_config(const std::filesystem::path& path);
PowerConfig parse_power_config(std::string_view text);
std::string format_power_config(const PowerConfig& cfg);

/// Draw of one node in its current state; 0 W when powered off.
double node_power(const SubstrateNode& node, const PowerConfig& cfg);

/// Total draw of the substrate.
double network_power(const SubstrateNetwork& sn, const PowerConfig& cfg);

/// Extra draw caused by embedding m on top of the current state. Hosts are
/// charged first in node order, then path nodes in link order, and anything
/// switched on by an earlier term counts as on for later ones, so the result
/// equals network_power(after) - network_power(before).
double embedding_power(const SubstrateNetwork& sn, const VirtualNetwork& vn, const Mapping& m,
                       const PowerConfig& cfg);

/// Incremental draw of hosting `cpu_demand` on node n given the view's state.
double placement_power(const ResourceView& view, NodeId n, double cpu_demand,
                       const PowerConfig& cfg);

}  // namespace vne
