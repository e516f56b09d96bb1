#pragma once

#include <cstddef>
#include <optional>

#include "vne/net_model.hpp"

namespace vne {

/// Node stage then link stage, no coordination between them. Virtual nodes in
/// descending resource score each take the host with the largest residual CPU
/// times incident residual bandwidth; links are then routed one by one.
std::optional<Mapping> greedy_two_stage(const SubstrateNetwork& sn, const VNRequest& vnr,
                                        std::size_t hops_max);

/// One-stage backtracking placement in breadth-first order with hosts ranked by
/// residual CPU times incident residual bandwidth. First success wins.
std::optional<Mapping> backtrack_bfs(const SubstrateNetwork& sn, const VNRequest& vnr,
                                     std::size_t hops_max, std::size_t max_backtrack);

}  // namespace vne
