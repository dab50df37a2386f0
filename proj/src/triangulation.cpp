#include "planehomeo/triangulation.hpp"

#include "planehomeo/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

namespace planehomeo {

std::array<double, 3> barycentric(const Point& a, const Point& b, const Point& c, const Point& x) {
  const double den = cross2(b - a, c - a);
  if (den == 0.0) throw InvalidGeometry("barycentric on a degenerate triangle");
  const double wa = cross2(b - x, c - x) / den;
  const double wb = cross2(c - x, a - x) / den;
  return {wa, wb, 1.0 - wa - wb};
}

namespace {

PointList densify_polyline(const PointList& pts, double h, bool closed) {
  PointList out;
  const std::size_t n = pts.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    out.push_back(a);
    const int k = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
    for (int j = 1; j < k; ++j) out.push_back(a + (static_cast<double>(j) / k) * (b - a));
  }
  if (!closed) out.push_back(pts.back());
  return out;
}

// True when w is inside or on the closed triangle (p, c, n), assumed CCW.
bool in_closed_triangle(const Point& p, const Point& c, const Point& n, const Point& w) {
  return orient(p, c, w) >= 0 && orient(c, n, w) >= 0 && orient(n, p, w) >= 0;
}

// Ear clipping of a simple CCW polygon; returns index triples into poly.
std::vector<std::array<int, 3>> earcut(const PointList& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) throw InvalidGeometry("earcut needs at least 3 vertices");
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;

  std::vector<std::array<int, 3>> tris;
  tris.reserve(n - 2);
  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    bool clipped = false;
    for (int i = 0; i < m; ++i) {
      const int ip = ring[(i + m - 1) % m];
      const int ic = ring[i];
      const int in = ring[(i + 1) % m];
      const Point &p = poly[ip], &c = poly[ic], &q = poly[in];
      if (orient(p, c, q) <= 0) continue;
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        const int iw = ring[j];
        if (iw == ip || iw == ic || iw == in) continue;
        if (in_closed_triangle(p, c, q, poly[iw])) blocked = true;
      }
      if (blocked) continue;
      tris.push_back({ip, ic, in});
      ring.erase(ring.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped)
      throw InvalidGeometry("ear clipping stalled with " + std::to_string(ring.size()) +
                            " vertices left");
  }
  if (orient(poly[ring[0]], poly[ring[1]], poly[ring[2]]) <= 0)
    throw InvalidGeometry("ear clipping left a degenerate final triangle");
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

struct EdgeKey {
  int a, b;
  EdgeKey(int u, int v) : a(std::min(u, v)), b(std::max(u, v)) {}
  bool operator<(const EdgeKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

// Insert m between consecutive loop entries u, v (either order) if present.
void split_loop_edge(std::vector<int>& loop, int u, int v, int m) {
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if ((loop[i] == u && loop[j] == v) || (loop[i] == v && loop[j] == u)) {
      loop.insert(loop.begin() + j, m);
      return;
    }
  }
}

// Positive when d lies strictly inside the circumcircle of the CCW triangle
// (a, b, c). Plain double arithmetic: used only as a quality heuristic, never
// for validity.
double incircle_det(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double ax = a.x() - d.x(), ay = a.y() - d.y();
  const double bx = b.x() - d.x(), by = b.y() - d.y();
  const double cx = c.x() - d.x(), cy = c.y() - d.y();
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

// Delaunay-style diagonal flips on interior edges. Ear clipping can leave
// long slivers whose midpoint subdivisions round to exactly degenerate
// triangles; flipping them away first keeps the min angle healthy so that can
// never happen. Flip legality is certified with exact orientation tests.
void improve_by_flips(Triangulation& T, int passes) {
  for (int pass = 0; pass < passes; ++pass) {
    std::map<EdgeKey, std::vector<int>> flank;
    for (int t = 0; t < static_cast<int>(T.triangles.size()); ++t)
      for (int k = 0; k < 3; ++k)
        flank[EdgeKey(T.triangles[t][k], T.triangles[t][(k + 1) % 3])].push_back(t);

    std::set<int> dirty;
    bool any = false;
    for (const auto& [e, ts] : flank) {
      if (ts.size() != 2 || dirty.count(ts[0]) || dirty.count(ts[1])) continue;
      // Orient the shared edge as (u, v) with t1 holding the directed edge.
      int t1 = ts[0], t2 = ts[1];
      int u = e.a, v = e.b;
      const auto has_directed = [&T](int t, int x, int y) {
        for (int k = 0; k < 3; ++k)
          if (T.triangles[t][k] == x && T.triangles[t][(k + 1) % 3] == y) return true;
        return false;
      };
      if (!has_directed(t1, u, v)) std::swap(t1, t2);
      if (!has_directed(t1, u, v)) continue;
      const auto apex = [&T](int t, int x, int y) {
        for (const int w : T.triangles[t])
          if (w != x && w != y) return w;
        return -1;
      };
      const int a = apex(t1, u, v), b = apex(t2, u, v);
      if (a < 0 || b < 0 || a == b) continue;
      const auto& P = T.vertices;
      if (incircle_det(P[u], P[v], P[a], P[b]) <= 0.0) continue;
      if (orient(P[u], P[b], P[a]) <= 0 || orient(P[b], P[v], P[a]) <= 0) continue;
      T.triangles[t1] = {u, b, a};
      T.triangles[t2] = {b, v, a};
      dirty.insert(t1);
      dirty.insert(t2);
      any = true;
    }
    if (!any) return;
  }
}

// Split every edge longer than h at its midpoint until none remain. One
// conforming bulk subdivision per pass.
void refine_to_edge_length(Triangulation& T, double h) {
  for (int pass = 0; pass < 48; ++pass) {
    improve_by_flips(T, 8);
    std::map<EdgeKey, int> mid;
    for (const auto& t : T.triangles)
      for (int k = 0; k < 3; ++k) {
        const int u = t[k], v = t[(k + 1) % 3];
        if ((T.vertices[v] - T.vertices[u]).norm() > h) mid.emplace(EdgeKey(u, v), -1);
      }
    if (mid.empty()) return;
    for (auto& [e, m] : mid) {
      m = static_cast<int>(T.vertices.size());
      T.vertices.push_back(0.5 * (T.vertices[e.a] + T.vertices[e.b]));
      split_loop_edge(T.boundary_loop, e.a, e.b, m);
      split_loop_edge(T.inner_loop, e.a, e.b, m);
    }
    std::vector<std::array<int, 3>> next;
    next.reserve(T.triangles.size() * 2);
    for (const auto& t : T.triangles) {
      int m01 = -1, m12 = -1, m20 = -1, cnt = 0;
      const auto lookup = [&mid](int u, int v) {
        const auto it = mid.find(EdgeKey(u, v));
        return it == mid.end() ? -1 : it->second;
      };
      m01 = lookup(t[0], t[1]);
      m12 = lookup(t[1], t[2]);
      m20 = lookup(t[2], t[0]);
      cnt = (m01 >= 0) + (m12 >= 0) + (m20 >= 0);
      if (cnt == 0) {
        next.push_back(t);
      } else if (cnt == 3) {
        next.push_back({t[0], m01, m20});
        next.push_back({m01, t[1], m12});
        next.push_back({m20, m12, t[2]});
        next.push_back({m01, m12, m20});
      } else if (cnt == 1) {
        const int k = m01 >= 0 ? 0 : (m12 >= 0 ? 1 : 2);
        const int m = std::max({m01, m12, m20});
        next.push_back({t[k], m, t[(k + 2) % 3]});
        next.push_back({m, t[(k + 1) % 3], t[(k + 2) % 3]});
      } else {
        // Two split edges: rotate so they are (v0,v1) and (v1,v2).
        int k;
        if (m01 >= 0 && m12 >= 0)
          k = 0;
        else if (m12 >= 0 && m20 >= 0)
          k = 1;
        else
          k = 2;
        const int v0 = t[k], v1 = t[(k + 1) % 3], v2 = t[(k + 2) % 3];
        const int a = lookup(v0, v1), b = lookup(v1, v2);
        next.push_back({a, v1, b});
        next.push_back({v0, a, b});
        next.push_back({v0, b, v2});
      }
    }
    T.triangles = std::move(next);
  }
  throw MeshRefinementExceeded("edge-length refinement did not converge");
}

void smooth_interior(Triangulation& T, const std::set<int>& pinned, int sweeps) {
  std::set<int> fixed(pinned);
  for (int v : T.boundary_loop) fixed.insert(v);
  for (int v : T.inner_loop) fixed.insert(v);

  const int nv = static_cast<int>(T.vertices.size());
  std::vector<std::set<int>> nbrs(nv);
  std::vector<std::vector<int>> star(nv);
  for (std::size_t ti = 0; ti < T.triangles.size(); ++ti) {
    const auto& t = T.triangles[ti];
    for (int k = 0; k < 3; ++k) {
      nbrs[t[k]].insert(t[(k + 1) % 3]);
      nbrs[t[k]].insert(t[(k + 2) % 3]);
      star[t[k]].push_back(static_cast<int>(ti));
    }
  }
  for (int s = 0; s < sweeps; ++s)
    for (int v = 0; v < nv; ++v) {
      if (fixed.count(v) || nbrs[v].empty()) continue;
      Point avg(0, 0);
      for (int u : nbrs[v]) avg += T.vertices[u];
      avg /= static_cast<double>(nbrs[v].size());
      const Point save = T.vertices[v];
      T.vertices[v] = avg;
      bool ok = true;
      for (int ti : star[v]) {
        const auto& t = T.triangles[ti];
        if (orient(T.vertices[t[0]], T.vertices[t[1]], T.vertices[t[2]]) <= 0) {
          ok = false;
          break;
        }
      }
      if (!ok) T.vertices[v] = save;
    }
}

// Insert p as an exact mesh vertex strictly inside the meshed region; returns
// its index.
int insert_interior_point(Triangulation& T, const Point& p, double tau) {
  for (std::size_t i = 0; i < T.vertices.size(); ++i)
    if (T.vertices[i] == p) return static_cast<int>(i);

  // Snap a nearby interior vertex onto p when no incident triangle flips.
  std::set<int> onBoundary(T.boundary_loop.begin(), T.boundary_loop.end());
  onBoundary.insert(T.inner_loop.begin(), T.inner_loop.end());
  for (std::size_t i = 0; i < T.vertices.size(); ++i) {
    if (onBoundary.count(static_cast<int>(i))) continue;
    if ((T.vertices[i] - p).norm() > tau) continue;
    const Point save = T.vertices[i];
    T.vertices[i] = p;
    bool ok = true;
    for (const auto& t : T.triangles)
      if ((t[0] == static_cast<int>(i) || t[1] == static_cast<int>(i) ||
           t[2] == static_cast<int>(i)) &&
          orient(T.vertices[t[0]], T.vertices[t[1]], T.vertices[t[2]]) <= 0) {
        ok = false;
        break;
      }
    if (ok) return static_cast<int>(i);
    T.vertices[i] = save;
  }

  for (std::size_t ti = 0; ti < T.triangles.size(); ++ti) {
    const auto t = T.triangles[ti];
    const Point &a = T.vertices[t[0]], &b = T.vertices[t[1]], &c = T.vertices[t[2]];
    const int o0 = orient(a, b, p), o1 = orient(b, c, p), o2 = orient(c, a, p);
    if (o0 < 0 || o1 < 0 || o2 < 0) continue;
    const int m = static_cast<int>(T.vertices.size());
    T.vertices.push_back(p);
    if (o0 == 0 || o1 == 0 || o2 == 0) {
      // On an interior edge: split both incident triangles.
      const int k = o0 == 0 ? 0 : (o1 == 0 ? 1 : 2);
      const int u = t[k], v = t[(k + 1) % 3];
      std::vector<std::array<int, 3>> next;
      for (const auto& s : T.triangles) {
        int e = -1;
        for (int q = 0; q < 3; ++q)
          if ((s[q] == u && s[(q + 1) % 3] == v) || (s[q] == v && s[(q + 1) % 3] == u)) e = q;
        if (e < 0) {
          next.push_back(s);
        } else {
          next.push_back({s[e], m, s[(e + 2) % 3]});
          next.push_back({m, s[(e + 1) % 3], s[(e + 2) % 3]});
        }
      }
      T.triangles = std::move(next);
    } else {
      T.triangles.erase(T.triangles.begin() + ti);
      T.triangles.push_back({t[0], t[1], m});
      T.triangles.push_back({t[1], t[2], m});
      T.triangles.push_back({t[2], t[0], m});
    }
    return m;
  }
  throw InvalidInput("required mesh point lies outside the domain");
}

}  // namespace

void validate_mesh(const Triangulation& T) {
  const int nv = static_cast<int>(T.vertices.size());
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : T.triangles) {
    if (t[0] < 0 || t[1] < 0 || t[2] < 0 || t[0] >= nv || t[1] >= nv || t[2] >= nv)
      throw InvalidGeometry("mesh triangle index out of range");
    if (orient(T.vertices[t[0]], T.vertices[t[1]], T.vertices[t[2]]) <= 0)
      throw InvalidGeometry("mesh triangle not counterclockwise");
    for (int k = 0; k < 3; ++k)
      if (++directed[{t[k], t[(k + 1) % 3]}] > 1)
        throw InvalidGeometry("mesh edge used twice in the same direction");
  }
  std::set<std::pair<int, int>> boundary;
  for (const auto& [e, cnt] : directed)
    if (!directed.count({e.second, e.first})) boundary.insert(e);
  std::size_t loopEdges = 0;
  for (const std::vector<int>* loop : {&T.boundary_loop, &T.inner_loop}) {
    const int n = static_cast<int>(loop->size());
    loopEdges += n;
    for (int i = 0; i < n; ++i)
      if (!boundary.count({(*loop)[i], (*loop)[(i + 1) % n]}) &&
          !boundary.count({(*loop)[(i + 1) % n], (*loop)[i]}))
        throw InvalidGeometry("stored loop edge is not a mesh boundary edge");
  }
  if (loopEdges != boundary.size())
    throw InvalidGeometry("mesh boundary does not match the stored loops");
}

Triangulation mesh_domain(const JordanDomain& dom, double target_edge,
                          const PointList& required_interior) {
  if (!(target_edge > 0.0)) throw InvalidInput("target edge length must be positive");
  Triangulation T;
  T.vertices = densify_polyline(dom.boundary, target_edge, true);
  T.triangles = earcut(T.vertices);
  T.boundary_loop.resize(T.vertices.size());
  for (std::size_t i = 0; i < T.vertices.size(); ++i) T.boundary_loop[i] = static_cast<int>(i);

  refine_to_edge_length(T, target_edge);
  smooth_interior(T, {}, 6);

  std::set<int> pinned;
  const double tau = 0.25 * target_edge;
  for (const auto& p : required_interior) pinned.insert(insert_interior_point(T, p, tau));
  if (!pinned.empty()) smooth_interior(T, pinned, 4);

  validate_mesh(T);
  return T;
}

Triangulation mesh_annulus(const PointList& innerRaw, const PointList& outerRaw,
                           double target_edge) {
  if (!(target_edge > 0.0)) throw InvalidInput("target edge length must be positive");
  PointList inner = densify_polyline(innerRaw, target_edge, true);
  PointList outer = densify_polyline(outerRaw, target_edge, true);

  // Horizontal cuts from the extreme inner vertices to the outer loop split
  // the annulus into two simple pieces that are meshed separately and glued.
  Box bb = bbox_of(inner);
  bb.expand(bbox_of(outer));
  const double weld_tol = default_tolerances().pt(bb);
  const auto hit_outer = [&outer, weld_tol](const Point& from, double dir) {
    int bestEdge = -1;
    double bestT = 0.0, bestDist = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(outer.size());
    for (int i = 0; i < n; ++i) {
      const Point &a = outer[i], &b = outer[(i + 1) % n];
      if ((a.y() <= from.y()) == (b.y() <= from.y())) continue;
      const double t = (from.y() - a.y()) / (b.y() - a.y());
      const double x = a.x() + t * (b.x() - a.x());
      const double d = dir * (x - from.x());
      if (d > 0.0 && d < bestDist) {
        bestDist = d;
        bestEdge = i;
        bestT = t;
      }
    }
    if (bestEdge < 0) throw InvalidGeometry("inner loop is not enclosed by the outer loop");
    const int n2 = static_cast<int>(outer.size());
    const Point &a = outer[bestEdge], &b = outer[(bestEdge + 1) % n2];
    // The hit keeps from.y() bit for bit so the whole cut is exactly
    // horizontal; densifying it then yields exactly collinear points, and ear
    // clipping cannot emit one-ulp slivers along the cut (their midpoint
    // subdivisions would round to exactly degenerate triangles).
    Point hit(a.x() + bestT * (b.x() - a.x()), from.y());
    if (a.y() == from.y()) {
      hit = a;
    } else if (b.y() == from.y()) {
      hit = b;
    } else {
      // A hit within welding distance of an edge endpoint would leave a
      // boundary edge far shorter than any usable tolerance; pull that
      // endpoint onto the cut line instead (the cut must stay horizontal).
      for (int k : {bestEdge, (bestEdge + 1) % n2}) {
        if ((outer[k] - hit).norm() <= weld_tol) {
          outer[k].y() = from.y();
          hit = outer[k];
          break;
        }
      }
    }
    return std::make_pair(bestEdge, hit);
  };

  int vL = 0, vR = 0;
  for (int i = 1; i < static_cast<int>(inner.size()); ++i) {
    const auto key = [&inner](int k) { return std::make_pair(inner[k].x(), inner[k].y()); };
    if (key(i) < key(vL)) vL = i;
    if (key(i) > key(vR)) vR = i;
  }
  const auto [edgeL, hitL] = hit_outer(inner[vL], -1.0);
  const auto [edgeR, hitR] = hit_outer(inner[vR], +1.0);
  if (edgeL == edgeR) throw InvalidGeometry("annulus cuts collide on one outer edge");

  // Insert the two hit points into the outer loop. A hit can land exactly on
  // an existing vertex; reuse it rather than creating a zero-length edge.
  PointList outer2;
  int hL = -1, hR = -1;
  const int no = static_cast<int>(outer.size());
  for (int i = 0; i < no; ++i) {
    if (outer[i] == hitL) hL = static_cast<int>(outer2.size());
    if (outer[i] == hitR) hR = static_cast<int>(outer2.size());
    outer2.push_back(outer[i]);
    if (i == edgeL && hitL != outer[edgeL] && hitL != outer[(edgeL + 1) % no]) {
      hL = static_cast<int>(outer2.size());
      outer2.push_back(hitL);
    }
    if (i == edgeR && hitR != outer[edgeR] && hitR != outer[(edgeR + 1) % no]) {
      hR = static_cast<int>(outer2.size());
      outer2.push_back(hitR);
    }
  }
  if (hL < 0 || hR < 0 || hL == hR)
    throw InvalidGeometry("annulus cut endpoints did not resolve to distinct outer vertices");

  const PointList cutLdn = densify_polyline({hitL, inner[vL]}, target_edge, false);
  const PointList cutRup = densify_polyline({inner[vR], hitR}, target_edge, false);

  const auto chain = [](const PointList& loop, int from, int to) {
    PointList c;
    for (int i = from;; i = (i + 1) % static_cast<int>(loop.size())) {
      c.push_back(loop[i]);
      if (i == to) break;
    }
    return c;
  };
  const auto reversed = [](PointList c) {
    std::reverse(c.begin(), c.end());
    return c;
  };
  const auto concat = [](std::initializer_list<PointList> parts) {
    PointList poly;
    for (const auto& part : parts)
      for (std::size_t i = poly.empty() ? 0 : 1; i < part.size(); ++i) poly.push_back(part[i]);
    poly.pop_back();  // closing vertex duplicates the start
    return poly;
  };

  // The CCW walk of the inner loop from vR to vL is the chain facing the
  // hR->hL outer arc; traversed reversed it closes the first piece. The
  // complementary chain and arc close the second.
  const PointList piece1 =
      concat({cutRup, chain(outer2, hR, hL), cutLdn, reversed(chain(inner, vR, vL))});
  const PointList piece2 =
      concat({chain(outer2, hL, hR), reversed(cutRup), reversed(chain(inner, vL, vR)),
              reversed(cutLdn)});

  Triangulation T;
  std::map<std::pair<double, double>, int> index;
  const auto global = [&](const Point& p) {
    const auto key = std::make_pair(p.x(), p.y());
    const auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(T.vertices.size());
    T.vertices.push_back(p);
    index.emplace(key, id);
    return id;
  };
  for (const PointList* piece : {&piece1, &piece2}) {
    if (polygon_signed_area(*piece) <= 0.0)
      throw InvalidGeometry("annulus piece is not counterclockwise");
    std::vector<int> ids;
    ids.reserve(piece->size());
    for (const auto& p : *piece) ids.push_back(global(p));
    for (const auto& t : earcut(*piece)) T.triangles.push_back({ids[t[0]], ids[t[1]], ids[t[2]]});
  }
  for (const auto& p : outer2) T.boundary_loop.push_back(global(p));
  for (const auto& p : inner) T.inner_loop.push_back(global(p));

  refine_to_edge_length(T, target_edge);
  smooth_interior(T, {}, 6);
  validate_mesh(T);
  return T;
}

TriangleLocator::TriangleLocator(const PointList& verts,
                                 const std::vector<std::array<int, 3>>& tris)
    : verts_(verts), tris_(tris) {
  box_.lo = Point(0, 0);
  box_.hi = Point(1, 1);
  if (!verts.empty()) box_ = bbox_of(verts);
  const int n = std::max<int>(1, static_cast<int>(tris.size()));
  nx_ = ny_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
  cw_ = std::max(box_.width() / nx_, 1e-300);
  ch_ = std::max(box_.height() / ny_, 1e-300);
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t ti = 0; ti < tris.size(); ++ti) {
    const auto& t = tris[ti];
    Box b = bbox_of({verts[t[0]], verts[t[1]], verts[t[2]]});
    int x0, x1, y0, y1;
    cell_range(b, x0, x1, y0, y1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        cells_[static_cast<std::size_t>(y) * nx_ + x].push_back(static_cast<int>(ti));
  }
}

void TriangleLocator::cell_range(const Box& b, int& x0, int& x1, int& y0, int& y1) const {
  x0 = std::clamp(static_cast<int>((b.lo.x() - box_.lo.x()) / cw_), 0, nx_ - 1);
  x1 = std::clamp(static_cast<int>((b.hi.x() - box_.lo.x()) / cw_), 0, nx_ - 1);
  y0 = std::clamp(static_cast<int>((b.lo.y() - box_.lo.y()) / ch_), 0, ny_ - 1);
  y1 = std::clamp(static_cast<int>((b.hi.y() - box_.lo.y()) / ch_), 0, ny_ - 1);
}

int TriangleLocator::find(const Point& x) const {
  Box b;
  b.lo = b.hi = x;
  int x0, x1, y0, y1;
  cell_range(b, x0, x1, y0, y1);
  for (int ti : cells_[static_cast<std::size_t>(y0) * nx_ + x0]) {
    const auto& t = tris_[ti];
    if (in_closed_triangle(verts_[t[0]], verts_[t[1]], verts_[t[2]], x)) return ti;
  }
  return -1;
}

int TriangleLocator::find_near(const Point& x, double tau, std::array<double, 3>* bary) const {
  const int exact = find(x);
  if (exact >= 0) {
    if (bary) {
      const auto& t = tris_[exact];
      *bary = barycentric(verts_[t[0]], verts_[t[1]], verts_[t[2]], x);
    }
    return exact;
  }
  Box b;
  b.lo = x - Point(tau, tau);
  b.hi = x + Point(tau, tau);
  int x0, x1, y0, y1;
  cell_range(b, x0, x1, y0, y1);
  int best = -1;
  double bestDist = tau;
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx)
      for (int ti : cells_[static_cast<std::size_t>(cy) * nx_ + cx]) {
        const auto& t = tris_[ti];
        double d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k)
          d = std::min(d, segment_distance_sq(verts_[t[k]], verts_[t[(k + 1) % 3]], x));
        d = std::sqrt(d);
        if (d < bestDist || (d == bestDist && best >= 0 && ti < best)) {
          bestDist = d;
          best = ti;
        }
      }
  if (best < 0) return -1;
  if (bary) {
    const auto& t = tris_[best];
    auto w = barycentric(verts_[t[0]], verts_[t[1]], verts_[t[2]], x);
    for (double& v : w) v = std::max(v, 0.0);
    const double s = w[0] + w[1] + w[2];
    for (double& v : w) v /= s;
    *bary = w;
  }
  return best;
}

}  // namespace planehomeo
