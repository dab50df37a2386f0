#include "planehomeo/jordan.hpp"

#include <cmath>

namespace planehomeo {

double PolyArc::length() const {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) acc += (pts[i + 1] - pts[i]).norm();
  if (closed && pts.size() > 1) acc += (pts.front() - pts.back()).norm();
  return acc;
}

Point PolyArc::at(double t) const {
  if (pts.empty()) throw InvalidInput("PolyArc::at on empty arc");
  if (pts.size() == 1) return pts[0];
  double total = length();
  if (total <= 0.0) return pts[0];
  if (closed) {
    t -= std::floor(t);
  } else {
    t = std::clamp(t, 0.0, 1.0);
  }
  double want = t * total;
  size_t n = pts.size();
  size_t edges = closed ? n : n - 1;
  double acc = 0.0;
  for (size_t i = 0; i < edges; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    double el = (b - a).norm();
    if (acc + el >= want || i + 1 == edges) {
      double s = el > 0.0 ? std::clamp((want - acc) / el, 0.0, 1.0) : 0.0;
      return a + s * (b - a);
    }
    acc += el;
  }
  return pts.back();
}

PolyArc PolyArc::reversed() const {
  PolyArc r;
  r.pts.assign(pts.rbegin(), pts.rend());
  r.closed = closed;
  return r;
}

double polygon_signed_area(const PointList& loop) {
  double acc = 0.0;
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    acc += cross2(a, b);
  }
  return 0.5 * acc;
}

double JordanDomain::area() const { return polygon_signed_area(boundary); }

double JordanDomain::perimeter() const {
  double acc = 0.0;
  size_t n = boundary.size();
  for (size_t i = 0; i < n; ++i) acc += (boundary[(i + 1) % n] - boundary[i]).norm();
  return acc;
}

Box JordanDomain::bbox() const { return bbox_of(boundary); }

Point JordanDomain::centroid() const {
  double a6 = 0.0;
  Point c(0, 0);
  size_t n = boundary.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& p = boundary[i];
    const Point& q = boundary[(i + 1) % n];
    double w = cross2(p, q);
    a6 += w;
    c += w * (p + q);
  }
  if (std::abs(a6) < 1e-300) return bbox().center();
  return c / (3.0 * a6);
}

namespace {

// Touch between non-adjacent edges: an unambiguous crossing or overlap.
std::optional<std::pair<int, int>> find_edge_crossing(const PointList& loop) {
  int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    Point a0 = loop[i], a1 = loop[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // shares the closing vertex
      if (segments_touch(a0, a1, loop[j], loop[(j + 1) % n])) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

// Adjacent edges that double back along a shared line.
std::optional<std::pair<int, int>> find_fold_back(const PointList& loop) {
  int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    Point a0 = loop[i], a1 = loop[(i + 1) % n];
    Point b1 = loop[(i + 2) % n];
    if (orient(a0, a1, b1) == 0 && (a0 - a1).dot(b1 - a1) > 0.0) return std::make_pair(i, (i + 1) % n);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> find_self_intersection(const PointList& loop) {
  if (auto w = find_edge_crossing(loop)) return w;
  return find_fold_back(loop);
}

JordanDomain validate_jordan(const PointList& vertices, const Tolerances& tol) {
  Box b = bbox_of(vertices);
  double tau = vertices.empty() ? 0.0 : tol.pt(b);
  PointList clean;
  clean.reserve(vertices.size());
  for (const auto& p : vertices) {
    if (!clean.empty() && (p - clean.back()).norm() <= tau) continue;
    clean.push_back(p);
  }
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= tau) clean.pop_back();
  if (clean.size() < 3) throw DegenerateArea("polygon has fewer than 3 distinct vertices");

  // A crossing between non-adjacent edges trumps the area test: a figure
  // eight has zero signed area but should be reported as self-intersecting.
  auto reject = [](const std::pair<int, int>& w) {
    throw SelfIntersection("polygon boundary self-intersects (segments " + std::to_string(w.first) +
                               " and " + std::to_string(w.second) + ")",
                           w.first, w.second);
  };
  if (auto w = find_edge_crossing(clean)) reject(*w);

  double a = polygon_signed_area(clean);
  double diag = b.diag();
  if (std::abs(a) <= tau * std::max(diag, 1.0)) throw DegenerateArea("polygon area below tolerance");
  if (a < 0.0) std::reverse(clean.begin(), clean.end());

  if (auto w = find_fold_back(clean)) reject(*w);
  JordanDomain d;
  d.boundary = std::move(clean);
  return d;
}

bool point_in_loop(const Point& x, const PointList& loop) {
  bool inside = false;
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    if ((a.y() <= x.y()) != (b.y() <= x.y())) {
      int o = orient(a, b, x);
      bool upward = b.y() > a.y();
      if (o == 0) return true;  // exactly on an edge crossing the scanline
      if (upward ? o > 0 : o < 0) inside = !inside;
    } else if (on_segment(a, b, x)) {
      return true;
    }
  }
  return inside;
}

double boundary_distance(const Point& x, const PointList& loop, bool closed) {
  double best = std::numeric_limits<double>::infinity();
  size_t n = loop.size();
  size_t edges = closed ? n : (n > 0 ? n - 1 : 0);
  for (size_t i = 0; i < edges; ++i) {
    best = std::min(best, segment_distance_sq(loop[i], loop[(i + 1) % n], x));
  }
  return std::sqrt(best);
}

Location locate(const Point& x, const JordanDomain& dom, double tau, const Tolerances& tol) {
  if (tau < 0.0) tau = tol.pt(dom.bbox());
  if (boundary_distance(x, dom.boundary) <= tau) return Location::Boundary;
  return point_in_loop(x, dom.boundary) ? Location::Inside : Location::Outside;
}

double boundary_parameter(const Point& x, const PointList& loop) {
  size_t n = loop.size();
  double best = std::numeric_limits<double>::infinity();
  double bestparam = 0.0;
  double acc = 0.0, total = 0.0;
  for (size_t i = 0; i < n; ++i) total += (loop[(i + 1) % n] - loop[i]).norm();
  if (total <= 0.0) return 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    Point d = b - a;
    double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    double dist = (x - (a + t * d)).squaredNorm();
    if (dist < best) {
      best = dist;
      bestparam = (acc + t * std::sqrt(len2)) / total;
    }
    acc += std::sqrt(len2);
  }
  return bestparam >= 1.0 ? bestparam - 1.0 : bestparam;
}

PointList densify_loop(const PointList& loop, double max_edge) {
  PointList out;
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    out.push_back(a);
    double len = (b - a).norm();
    int k = static_cast<int>(std::ceil(len / max_edge));
    for (int j = 1; j < k; ++j) out.push_back(a + (static_cast<double>(j) / k) * (b - a));
  }
  return out;
}

bool cyclic_before(double s0, double s1, double s2) {
  auto fwd = [](double from, double to) {
    double d = to - from;
    d -= std::floor(d);
    return d;
  };
  return fwd(s0, s1) <= fwd(s0, s2);
}

}  // namespace planehomeo
