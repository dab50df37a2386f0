#include "planehomeo/chart.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <utility>

namespace planehomeo {
namespace {

double seg_dist_sq(const Point& a, const Point& b, const Point& p) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).squaredNorm();
}

// Returns the loop with p as a vertex, inserting it into its nearest edge when
// it is not one already. p must lie on the boundary within tau.
PointList with_boundary_vertex(const PointList& loop, const Point& p, double tau) {
  for (const Point& q : loop)
    if (q == p) return loop;
  const int n = static_cast<int>(loop.size());
  int best = -1;
  double bestD = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = seg_dist_sq(loop[i], loop[(i + 1) % n], p);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  }
  if (!(std::sqrt(bestD) <= tau)) throw InvalidInput("anchor does not lie on the region boundary");
  PointList out;
  out.reserve(loop.size() + 1);
  for (int i = 0; i < n; ++i) {
    out.push_back(loop[i]);
    if (i == best) out.push_back(p);
  }
  return out;
}

int find_vertex(const PointList& verts, const Point& p) {
  for (int i = 0; i < static_cast<int>(verts.size()); ++i)
    if (verts[i] == p) return i;
  return -1;
}

// Cumulative arclength of the chain, normalized to [0, 1].
std::vector<double> chain_fractions(const PointList& verts, const std::vector<int>& chain) {
  std::vector<double> s(chain.size(), 0.0);
  for (size_t i = 1; i < chain.size(); ++i)
    s[i] = s[i - 1] + (verts[chain[i]] - verts[chain[i - 1]]).norm();
  const double total = s.back();
  if (!(total > 0.0)) throw InvalidGeometry("zero-length boundary chain");
  for (double& v : s) v /= total;
  return s;
}

// Fills the unpinned entries of positions with the solution of the mean-value
// convex-combination system over the mesh: each free vertex becomes a strictly
// positive weighted average of its neighbors. With the pinned vertices on a
// convex polygon this yields an embedding, which the caller certifies anyway.
PointList solve_convex_combination(const Triangulation& T, const std::vector<char>& pinned,
                                   PointList positions) {
  const int n = static_cast<int>(T.vertices.size());
  std::vector<int> idx(n, -1);
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) idx[i] = m++;
  if (m == 0) return positions;

  std::vector<std::map<int, double>> w(n);
  for (const auto& t : T.triangles) {
    for (int c = 0; c < 3; ++c) {
      const int i = t[c], j = t[(c + 1) % 3], k = t[(c + 2) % 3];
      if (pinned[i]) continue;
      const Point a = T.vertices[j] - T.vertices[i];
      const Point b = T.vertices[k] - T.vertices[i];
      const double cross = cross2(a, b);
      if (!(cross > 0.0)) throw InvalidGeometry("degenerate triangle in parameterization");
      const double la = a.norm(), lb = b.norm();
      const double tan_half = (la * lb - a.dot(b)) / cross;  // tan of half the corner angle
      w[i][j] += tan_half / la;
      w[i][k] += tan_half / lb;
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd bx = Eigen::VectorXd::Zero(m), by = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    if (pinned[i]) continue;
    double diag = 0.0;
    for (const auto& [j, wij] : w[i]) {
      diag += wij;
      if (pinned[j]) {
        bx(idx[i]) += wij * positions[j].x();
        by(idx[i]) += wij * positions[j].y();
      } else {
        trips.emplace_back(idx[i], idx[j], -wij);
      }
    }
    trips.emplace_back(idx[i], idx[i], diag);
  }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success) throw InvalidGeometry("parameterization system not solvable");
  const Eigen::VectorXd X = lu.solve(bx);
  const Eigen::VectorXd Y = lu.solve(by);
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) positions[i] = Point(X(idx[i]), Y(idx[i]));
  return positions;
}

}  // namespace

DiskChart schoenflies_chart(const JordanDomain& region, const Point& anchorA,
                            const Point& anchorB) {
  if (anchorA == anchorB) throw InvalidInput("anchors must be distinct boundary points");
  const Box bb = region.bbox();
  const double tau = default_tolerances().pt(bb);
  PointList loop = with_boundary_vertex(region.boundary, anchorA, tau);
  loop = with_boundary_vertex(loop, anchorB, tau);
  const JordanDomain dom{loop};

  double h = 0.15 * bb.diag();
  for (int attempt = 0; attempt < 5; ++attempt, h *= 0.5) {
    const Triangulation T = mesh_domain(dom, h);
    const int ia = find_vertex(T.vertices, anchorA);
    const int ib = find_vertex(T.vertices, anchorB);
    if (ia < 0 || ib < 0) throw InvalidGeometry("anchor vertex lost during meshing");

    const auto& L = T.boundary_loop;
    const int nL = static_cast<int>(L.size());
    int posA = -1, posB = -1;
    for (int i = 0; i < nL; ++i) {
      if (L[i] == ia) posA = i;
      if (L[i] == ib) posB = i;
    }
    if (posA < 0 || posB < 0) throw InvalidGeometry("anchor is not a boundary vertex");

    std::vector<int> chainAB, chainBA;
    for (int i = posA;; i = (i + 1) % nL) {
      chainAB.push_back(L[i]);
      if (i == posB) break;
    }
    for (int i = posB;; i = (i + 1) % nL) {
      chainBA.push_back(L[i]);
      if (i == posA) break;
    }

    // Boundary goes to the unit circle by arclength: the CCW chain A->B covers
    // the lower semicircle, the chain B->A the upper one, anchors pinned last
    // so they land on (-1,0) and (1,0) exactly.
    std::vector<char> pinned(T.vertices.size(), 0);
    PointList pos(T.vertices.size(), Point::Zero());
    const auto fAB = chain_fractions(T.vertices, chainAB);
    for (size_t q = 0; q < chainAB.size(); ++q) {
      pos[chainAB[q]] = Point(-std::cos(M_PI * fAB[q]), -std::sin(M_PI * fAB[q]));
      pinned[chainAB[q]] = 1;
    }
    const auto fBA = chain_fractions(T.vertices, chainBA);
    for (size_t q = 0; q < chainBA.size(); ++q) {
      pos[chainBA[q]] = Point(std::cos(M_PI * fBA[q]), std::sin(M_PI * fBA[q]));
      pinned[chainBA[q]] = 1;
    }
    pos[ia] = Point(-1.0, 0.0);
    pos[ib] = Point(1.0, 0.0);

    PointList param = solve_convex_combination(T, pinned, std::move(pos));
    try {
      return DiskChart{build_pl_homeo(T, std::move(param)), ia, ib};
    } catch (const FlippedTriangle&) {
      // fall through to a finer mesh
    }
  }
  throw MeshRefinementExceeded("disk parameterization failed to embed after refinement");
}

namespace {

// Shortest mesh path (by edge count) from the inner loop to the outer one.
// Multi-source BFS; ties resolve by ascending vertex id, so the result is
// deterministic. Returned path runs inner -> outer, interior vertices strictly
// inside the annulus.
std::vector<int> seam_path(const Triangulation& T) {
  const int n = static_cast<int>(T.vertices.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& t : T.triangles)
    for (int c = 0; c < 3; ++c) {
      adj[t[c]].push_back(t[(c + 1) % 3]);
      adj[t[c]].push_back(t[(c + 2) % 3]);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<char> isOuter(n, 0);
  for (const int v : T.boundary_loop) isOuter[v] = 1;

  std::vector<int> parent(n, -2);
  std::vector<int> sources(T.inner_loop);
  std::sort(sources.begin(), sources.end());
  std::queue<int> q;
  for (const int v : sources) {
    parent[v] = -1;
    q.push(v);
  }
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const int v : adj[u]) {
      if (parent[v] != -2) continue;
      parent[v] = u;
      if (isOuter[v]) {
        std::vector<int> path;
        for (int w = v; w != -1; w = parent[w]) path.push_back(w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push(v);
    }
  }
  throw InvalidGeometry("annulus mesh is not connected");
}

struct CutMesh {
  Triangulation mesh;     // a disk: the annulus cut open along the seam
  std::vector<int> twin;  // twin[i] = duplicate vertex id for path[i]
};

// A triangle with all three corners pinned would land on one straight side of
// the parameter rectangle with exactly collinear images. Splitting it at its
// world centroid gives it a free interior vertex instead.
void split_all_pinned_triangles(Triangulation& T, std::vector<char>& pinned) {
  std::vector<std::array<int, 3>> out;
  out.reserve(T.triangles.size());
  for (const auto& t : T.triangles) {
    if (pinned[t[0]] && pinned[t[1]] && pinned[t[2]]) {
      const int m = static_cast<int>(T.vertices.size());
      T.vertices.push_back((T.vertices[t[0]] + T.vertices[t[1]] + T.vertices[t[2]]) / 3.0);
      pinned.push_back(0);
      out.push_back({t[0], t[1], m});
      out.push_back({t[1], t[2], m});
      out.push_back({t[2], t[0], m});
    } else {
      out.push_back(t);
    }
  }
  T.triangles = std::move(out);
}

// Cuts the annulus mesh open along the seam path. Triangles on the right of
// the directed path (found by a fan flood around each path vertex seeded from
// the triangles holding the reversed seam edges) are re-pointed at duplicate
// vertices, which turns the annulus into a disk whose boundary runs around the
// inner loop, up one seam copy, around the outer loop, and down the other.
CutMesh cut_along_seam(const Triangulation& T, const std::vector<int>& path) {
  const int k = static_cast<int>(path.size());
  std::map<std::pair<int, int>, int> dirTri;
  for (int t = 0; t < static_cast<int>(T.triangles.size()); ++t)
    for (int c = 0; c < 3; ++c)
      dirTri[{T.triangles[t][c], T.triangles[t][(c + 1) % 3]}] = t;
  std::vector<std::vector<int>> inc(T.vertices.size());
  for (int t = 0; t < static_cast<int>(T.triangles.size()); ++t)
    for (int c = 0; c < 3; ++c) inc[T.triangles[t][c]].push_back(t);

  PointList verts = T.vertices;
  std::vector<std::array<int, 3>> tris = T.triangles;
  std::vector<int> twin(k, -1);
  for (int i = 0; i < k; ++i) {
    twin[i] = static_cast<int>(verts.size());
    verts.push_back(T.vertices[path[i]]);
  }

  for (int i = 0; i < k; ++i) {
    const int v = path[i];
    std::set<int> barrier;
    std::vector<int> seeds;
    if (i > 0) {
      barrier.insert(path[i - 1]);
      const auto it = dirTri.find({v, path[i - 1]});
      if (it == dirTri.end()) throw InvalidGeometry("seam edge has no right-side triangle");
      seeds.push_back(it->second);
    }
    if (i + 1 < k) {
      barrier.insert(path[i + 1]);
      const auto it = dirTri.find({path[i + 1], v});
      if (it == dirTri.end()) throw InvalidGeometry("seam edge has no right-side triangle");
      seeds.push_back(it->second);
    }
    std::map<int, std::vector<int>> spokes;  // other endpoint -> triangles on edge (v, other)
    for (const int t : inc[v])
      for (int c = 0; c < 3; ++c)
        if (T.triangles[t][c] != v) spokes[T.triangles[t][c]].push_back(t);

    std::set<int> side(seeds.begin(), seeds.end());
    std::vector<int> stack(seeds.begin(), seeds.end());
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int c = 0; c < 3; ++c) {
        const int x = T.triangles[t][c];
        if (x == v || barrier.count(x)) continue;
        for (const int t2 : spokes[x])
          if (side.insert(t2).second) stack.push_back(t2);
      }
    }
    for (const int t : side)
      for (int c = 0; c < 3; ++c)
        if (tris[t][c] == v) tris[t][c] = twin[i];
  }

  // The cut boundary, walked through the unpaired directed edges.
  std::set<std::pair<int, int>> dir2;
  for (const auto& t : tris)
    for (int c = 0; c < 3; ++c) dir2.insert({t[c], t[(c + 1) % 3]});
  std::map<int, int> succ;
  for (const auto& e : dir2)
    if (!dir2.count({e.second, e.first})) {
      if (succ.count(e.first)) throw InvalidGeometry("cut mesh boundary is not a manifold cycle");
      succ[e.first] = e.second;
    }
  std::vector<int> cycle;
  const int start = twin[0];
  int cur = start;
  do {
    const auto it = succ.find(cur);
    if (it == succ.end()) throw InvalidGeometry("cut mesh boundary is not closed");
    cycle.push_back(cur);
    cur = it->second;
  } while (cur != start && cycle.size() <= succ.size());
  if (cur != start || cycle.size() != succ.size())
    throw InvalidGeometry("cut mesh boundary is not a single cycle");

  CutMesh out;
  out.mesh.vertices = std::move(verts);
  out.mesh.triangles = std::move(tris);
  out.mesh.boundary_loop = std::move(cycle);
  out.twin = std::move(twin);
  return out;
}

}  // namespace

AnnulusChart annulus_chart(const PointList& inner, const PointList& outer, double target_edge) {
  double h = target_edge;
  for (int attempt = 0; attempt < 5; ++attempt, h *= 0.5) {
    const Triangulation T = mesh_annulus(inner, outer, h);
    const std::vector<int> path = seam_path(T);
    CutMesh cut = cut_along_seam(T, path);
    const auto& cycle = cut.mesh.boundary_loop;

    // The cycle starts at the inner seam twin, corner (0,0) of the parameter
    // square; the original seam vertices form the right edge.
    const int p0 = path.front(), pk = path.back();
    const int tk = cut.twin.back();
    const auto pos_in_cycle = [&](int v) {
      const auto it = std::find(cycle.begin(), cycle.end(), v);
      if (it == cycle.end()) throw InvalidGeometry("seam endpoint missing from cut boundary");
      return static_cast<int>(it - cycle.begin());
    };
    const int iP0 = pos_in_cycle(p0);
    const int iPk = pos_in_cycle(pk);
    const int iTk = pos_in_cycle(tk);
    if (!(0 < iP0 && iP0 < iPk && iPk < iTk))
      throw InvalidGeometry("cut boundary runs out of order");

    std::vector<int> bottom(cycle.begin(), cycle.begin() + iP0 + 1);
    std::vector<int> right(cycle.begin() + iP0, cycle.begin() + iPk + 1);
    std::vector<int> top(cycle.begin() + iPk, cycle.begin() + iTk + 1);
    std::vector<int> left(cycle.begin() + iTk, cycle.end());
    left.push_back(cycle.front());

    std::vector<char> pinned(cut.mesh.vertices.size(), 0);
    for (int v : cycle) pinned[v] = 1;
    split_all_pinned_triangles(cut.mesh, pinned);

    PointList pos(cut.mesh.vertices.size(), Point::Zero());
    const auto place = [&](const std::vector<int>& run, auto&& at) {
      const auto f = chain_fractions(cut.mesh.vertices, run);
      for (size_t q = 0; q < run.size(); ++q) {
        pos[run[q]] = at(f[q]);
        pinned[run[q]] = 1;
      }
    };
    place(bottom, [](double f) { return Point(f, 0.0); });
    place(right, [](double f) { return Point(1.0, f); });
    place(top, [](double f) { return Point(1.0 - f, 1.0); });
    place(left, [](double f) { return Point(0.0, 1.0 - f); });
    pos[cycle.front()] = Point(0.0, 0.0);
    pos[p0] = Point(1.0, 0.0);
    pos[pk] = Point(1.0, 1.0);
    pos[tk] = Point(0.0, 1.0);

    PointList param = solve_convex_combination(cut.mesh, pinned, std::move(pos));
    try {
      return AnnulusChart{build_pl_homeo(std::move(cut.mesh), std::move(param)),
                          std::move(bottom), std::move(right), std::move(top), std::move(left)};
    } catch (const FlippedTriangle&) {
      // fall through to a finer mesh
    }
  }
  throw MeshRefinementExceeded("annulus parameterization failed to embed after refinement");
}

}  // namespace planehomeo
