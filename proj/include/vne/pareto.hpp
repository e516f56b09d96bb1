#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vne {

/// A point in objective space; every coordinate is minimized.
using ObjectivePoint = std::vector<double>;

/// a dominates b: no worse everywhere and strictly better somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Non-domination levels, best first. Indices inside a front are ascending.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const ObjectivePoint> points);

/// Crowding distance of each member of one front, in input order. Boundary
/// members of any objective get +inf; a zero-range objective adds nothing.
std::vector<double> crowding_distance(std::span<const ObjectivePoint> front);

/// Indices of points ordered by (front rank, descending crowding, index).
std::vector<std::size_t> rank_by_front_and_crowding(std::span<const ObjectivePoint> points);

}  // namespace vne
