#include "vne/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace vne {

bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const ObjectivePoint> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);  // S_p
  std::vector<std::size_t> domination_count(n, 0);        // n_p
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated_by[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (domination_count[p] == 0) current.push_back(p);

  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current)
      for (std::size_t q : dominated_by[p])
        if (--domination_count[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectivePoint> front) {
  const std::size_t n = front.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n == 0) return distance;
  if (n <= 2) return std::vector<double>(n, kInf);

  const std::size_t objectives = front[0].size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < objectives; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    double range = front[order.back()][k] - front[order.front()][k];
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      distance[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
  }
  return distance;
}

std::vector<std::size_t> rank_by_front_and_crowding(std::span<const ObjectivePoint> points) {
  std::vector<std::size_t> out;
  out.reserve(points.size());
  for (const auto& front : fast_nondominated_sort(points)) {
    std::vector<ObjectivePoint> members;
    members.reserve(front.size());
    for (std::size_t i : front) members.push_back(points[i]);
    std::vector<double> crowd = crowding_distance(members);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
    for (std::size_t i : order) out.push_back(front[i]);
  }
  return out;
}

}  // namespace vne
