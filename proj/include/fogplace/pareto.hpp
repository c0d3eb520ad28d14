#ifndef FOGPLACE_PARETO_HPP
#define FOGPLACE_PARETO_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace fogplace {

/// a dominates b: a is no worse in every objective and strictly better in
/// at least one (minimization). Points are indexable with size().
template <typename Point>
bool dominates(const Point& a, const Point& b) {
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

/// Non-dominated sorting: front 0 holds the indices of the non-dominated
/// points, front k+1 the points non-dominated once fronts <= k are removed.
template <typename Point>
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Point> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated_by[q].push_back(p);
        ++domination_count[p];
      }
    }

  std::vector<std::size_t> current;
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

/// NSGA-II crowding distance for one front. Boundary solutions per objective
/// get infinity; interior ones accumulate normalized gaps between their
/// sorted neighbors. Objectives with zero extent contribute nothing.
template <typename Point>
std::vector<double> crowding_distance(std::span<const Point> front) {
  const std::size_t n = front.size();
  if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t m = front[0].size();
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
    const double lo = front[order.front()][obj];
    const double hi = front[order.back()][obj];
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    if (hi <= lo) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (distance[order[k]] == inf) continue;
      distance[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / (hi - lo);
    }
  }
  return distance;
}

/// Indices of the non-dominated subset, equal to front 0 of the sort.
template <typename Point>
std::vector<std::size_t> pareto_filter(std::span<const Point> points) {
  auto fronts = fast_nondominated_sort(points);
  if (fronts.empty()) return {};
  return std::move(fronts.front());
}

}  // namespace fogplace

#endif  // FOGPLACE_PARETO_HPP
