#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "vne/net_model.hpp"

namespace vne {

// BRITE-style substrate files:
//
//   Topology: ( <N> Nodes, <E> Edges )
//
//   Nodes: ( <N> )
//   <id> <x> <y> <in_deg> <out_deg> <cpu_capacity> <profile_name>
//   ...
//
//   Edges: ( <E> )
//   <id> <from> <to> <length> <delay> <bandwidth> -1 -1 E_RT U
//   ...
//
// Profile names are resolved against `profile_names`, where the position of a
// name is its ProfileId.

std::string format_brite(const SubstrateNetwork& sn, std::span<const std::string> profile_names);
void brite_write(const SubstrateNetwork& sn, std::span<const std::string> profile_names,
                 const std::filesystem::path& path);

/// Throws ParseError naming the offending line.
SubstrateNetwork parse_brite(std::string_view text, std::span<const std::string> profile_names);
/// Throws IoError or ParseError.
SubstrateNetwork brite_read(const std::filesystem::path& path,
                            std::span<const std::string> profile_names);

}  // namespace vne
