#include "planehomeo/epsilon.hpp"

#include <cmath>
#include <numeric>

namespace planehomeo {
namespace {

// Edges of a closed polyline; a single point yields one degenerate edge.
std::vector<std::pair<Point, Point>> edges_of(const PointList& s) {
  std::vector<std::pair<Point, Point>> out;
  const int n = static_cast<int>(s.size());
  if (n == 1) {
    out.emplace_back(s[0], s[0]);
    return out;
  }
  for (int i = 0; i < n; ++i) out.emplace_back(s[i], s[(i + 1) % n]);
  return out;
}

bool region_contains(const PointList& loop, const Point& p) {
  return loop.size() >= 3 && std::fabs(polygon_signed_area(loop)) > 0.0 && point_in_loop(p, loop);
}

}  // namespace

double set_distance(const PointList& a, const PointList& b) {
  if (a.empty() || b.empty()) throw InvalidInput("set distance of an empty set");
  if (region_contains(a, b[0]) || region_contains(b, a[0])) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a0, a1] : edges_of(a))
    for (const auto& [b0, b1] : edges_of(b)) {
      best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
      if (best == 0.0) return 0.0;
    }
  return best;
}

EpsilonNeighborhood epsilon_components(const std::vector<PointList>& base, double eps) {
  if (!(eps > 0.0)) throw NonPositiveEpsilon("eps must be positive");
  const int n = static_cast<int>(base.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (set_distance(base[i], base[j]) <= 2.0 * eps) parent[find(i)] = find(j);

  EpsilonNeighborhood out;
  out.base = base;
  out.epsilon = eps;
  out.component_of.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (out.component_of[r] < 0) out.component_of[r] = out.component_count++;
    out.component_of[i] = out.component_of[r];
  }
  return out;
}

double separation_threshold(const PointList& a, const PointList& b) {
  const double d = set_distance(a, b);
  if (d <= 0.0) throw InvalidInput("sets touch or overlap; no separating eps exists");
  return 0.5 * d;
}

}  // namespace planehomeo
