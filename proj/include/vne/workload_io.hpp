#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vne/net_model.hpp"

namespace vne {

// One JSON object per line:
//   {"id":0,"arrival":12.5,"lifetime":480,"nodes":[[0,500],[1,2000]],"links":[[0,1,17]]}

std::string format_workload(std::span<const VNRequest> workload);
void workload_write(std::span<const VNRequest> workload, const std::filesystem::path& path);

/// Throws ParseError naming the offending line.
std::vector<VNRequest> parse_workload(std::string_view text);
/// Throws IoError or ParseError.
std::vector<VNRequest> workload_read(const std::filesystem::path& path);

}  // namespace vne
