#include "planehomeo/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace planehomeo {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Merges points that agree within tau into single nodes. Input vertices win over
// constructed crossing points as the stored representative.
struct Welder {
  double tau;
  double cell;
  PointList pts;
  std::vector<int> prio;
  std::unordered_map<std::int64_t, std::vector<int>> grid;

  explicit Welder(double tau_) : tau(tau_), cell(std::max(tau_, 1e-300)) {}

  std::int64_t key(std::int64_t ix, std::int64_t iy) const {
    return ix * 73856093LL ^ iy * 19349663LL;
  }

  int add(const Point& p, int priority) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x() / cell));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y() / cell));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(ix + dx, iy + dy));
        if (it == grid.end()) continue;
        for (int id : it->second)
          if ((pts[id] - p).norm() <= tau) {
            if (priority < prio[id]) {
              pts[id] = p;
              prio[id] = priority;
            }
            return id;
          }
      }
    const int id = static_cast<int>(pts.size());
    pts.push_back(p);
    prio.push_back(priority);
    grid[key(ix, iy)].push_back(id);
    return id;
  }
};

struct EdgeEvent {
  double t;
  Point p;
};

struct Overlay {
  Welder weld;
  std::vector<int> loopD, loopE;     // cyclic node sequences, no consecutive repeats
  PointList ptsD, ptsE;              // coordinates of the refined loops
  std::size_t contact_events = 0;    // crossings, touches and near-touches seen
  explicit Overlay(double tau) : weld(tau) {}
};

std::vector<int> sequence_nodes(const PointList& loop, std::vector<std::vector<EdgeEvent>>& events,
                                Welder& weld) {
  std::vector<int> seq;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    seq.push_back(weld.add(loop[i], 0));
    auto& ev = events[i];
    std::stable_sort(ev.begin(), ev.end(), [](const EdgeEvent& a, const EdgeEvent& b) { return a.t < b.t; });
    for (const auto& e : ev) seq.push_back(weld.add(e.p, 1));
  }
  std::vector<int> out;
  for (int id : seq)
    if (out.empty() || out.back() != id) out.push_back(id);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

// Splits both boundaries at every mutual crossing, touch, and sub-tau near-touch,
// then welds coincident points into shared nodes.
Overlay build_overlay(const PointList& dLoop, const PointList& eLoop, double tau) {
  Overlay ov(tau);
  const int nd = static_cast<int>(dLoop.size());
  const int ne = static_cast<int>(eLoop.size());
  std::vector<std::vector<EdgeEvent>> evD(nd), evE(ne);

  for (int i = 0; i < nd; ++i) {
    const Point p0 = dLoop[i], p1 = dLoop[(i + 1) % nd];
    const Point r = p1 - p0;
    for (int j = 0; j < ne; ++j) {
      const Point q0 = eLoop[j], q1 = eLoop[(j + 1) % ne];
      const int o1 = orient(p0, p1, q0);
      const int o2 = orient(p0, p1, q1);
      const int o3 = orient(q0, q1, p0);
      const int o4 = orient(q0, q1, p1);
      if (o1 * o2 < 0 && o3 * o4 < 0) {
        const Point s = q1 - q0;
        const double den = cross2(r, s);
        const double t = cross2(q0 - p0, s) / den;
        const double u = cross2(q0 - p0, r) / den;
        const Point x = p0 + t * r;
        evD[i].push_back({t, x});
        evE[j].push_back({u, x});
        ++ov.contact_events;
      }
      // Endpoints of one edge lying on (or within tau of) the other edge become
      // split points carrying the vertex's exact coordinates, so the weld is exact.
      auto vertex_onto = [&](const Point& v, const Point& a, const Point& b,
                             std::vector<EdgeEvent>& sink) {
        if (segment_distance_sq(a, b, v) > tau * tau) return;
        const Point ab = b - a;
        const double len2 = ab.squaredNorm();
        if (len2 <= 0.0) return;
        const double t = std::clamp(ab.dot(v - a) / len2, 0.0, 1.0);
        if (t > 0.0 && t < 1.0) sink.push_back({t, v});
        ++ov.contact_events;
      };
      vertex_onto(q0, p0, p1, evD[i]);
      vertex_onto(p0, q0, q1, evE[j]);
    }
  }
  ov.loopD = sequence_nodes(dLoop, evD, ov.weld);
  ov.loopE = sequence_nodes(eLoop, evE, ov.weld);
  for (int id : ov.loopD) ov.ptsD.push_back(ov.weld.pts[id]);
  for (int id : ov.loopE) ov.ptsE.push_back(ov.weld.pts[id]);
  return ov;
}

std::int64_t pair_key(int u, int v) { return (static_cast<std::int64_t>(u) << 32) | static_cast<std::int64_t>(v); }

struct TraceEdge {
  int u, v;
  int payload;
};

// Extracts minimal counterclockwise cycles from a set of directed edges by always
// taking the leftmost (largest CCW turn) unused continuation.
std::vector<std::vector<int>> trace_cycles(const PointList& nodes, const std::vector<TraceEdge>& edges,
                                           std::vector<std::string>* warnings) {
  std::unordered_map<int, std::vector<int>> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) out[edges[e].u].push_back(e);
  std::vector<char> used(edges.size(), 0);
  std::vector<std::vector<int>> cycles;

  for (int e0 = 0; e0 < static_cast<int>(edges.size()); ++e0) {
    if (used[e0]) continue;
    std::vector<int> path{e0};
    used[e0] = 1;
    bool closed = false;
    for (std::size_t step = 0; step <= edges.size(); ++step) {
      const TraceEdge& last = edges[path.back()];
      const Point din = nodes[last.v] - nodes[last.u];
      auto it = out.find(last.v);
      int best = -1;
      double bestAngle = -std::numeric_limits<double>::infinity();
      double secondAngle = -std::numeric_limits<double>::infinity();
      if (it != out.end()) {
        for (int f : it->second) {
          if (used[f] && f != e0) continue;
          double a;
          if (edges[f].v == last.u && edges[f].u == last.v) {
            a = -2.0 * kPi;  // exact back-track, last resort only
          } else {
            const Point dout = nodes[edges[f].v] - nodes[edges[f].u];
            a = std::atan2(cross2(din, dout), din.dot(dout));
          }
          if (a > bestAngle) {
            secondAngle = bestAngle;
            bestAngle = a;
            best = f;
          } else if (a > secondAngle) {
            secondAngle = a;
          }
        }
      }
      if (best >= 0 && bestAngle - secondAngle < 1e-12 && bestAngle > -2.0 * kPi)
        throw NonGenericContact("ambiguous continuation while tracing boundary cycles");
      if (best < 0) {
        if (warnings) warnings->push_back("discarded an open boundary chain during cycle tracing");
        break;
      }
      if (best == e0) {
        closed = true;
        break;
      }
      path.push_back(best);
      used[best] = 1;
    }
    if (closed) cycles.push_back(std::move(path));
  }
  return cycles;
}

double cycle_area(const PointList& nodes, const std::vector<TraceEdge>& edges, const std::vector<int>& cyc) {
  PointList poly;
  for (int e : cyc) poly.push_back(nodes[edges[e].u]);
  return polygon_signed_area(poly);
}

struct DecompContext {
  Overlay ov;
  double tau;
  // directed sub-edge (u, v) of the union boundary -> owning lobe
  std::unordered_map<std::int64_t, int> lobe_of;
  explicit DecompContext(Overlay o, double t) : ov(std::move(o)), tau(t) {}
};

int find_node(const std::vector<int>& loop, int id) {
  for (int i = 0; i < static_cast<int>(loop.size()); ++i)
    if (loop[i] == id) return i;
  return -1;
}

}  // namespace

std::vector<Point> IntersectionComponent::alpha_endpoints() const {
  std::vector<Point> out;
  for (const auto& p : pieces)
    if (p.kind == PieceKind::AlphaOnD && !p.arc.closed) {
      out.push_back(p.arc.pts.front());
      out.push_back(p.arc.pts.back());
    }
  return out;
}

Decomposition decompose(const JordanDomain& D, const JordanDomain& E, const Tolerances& tol) {
  Box scope = D.bbox();
  scope.expand(E.bbox());
  const double tau = tol.pt(scope);

  Decomposition dec;
  DecompContext ctx(build_overlay(D.boundary, E.boundary, tau), tau);
  Overlay& ov = ctx.ov;
  const PointList& nodes = ov.weld.pts;

  // Directed sub-edge sets of both refined loops.
  std::unordered_map<std::int64_t, int> edgesOfE, edgesOfD;
  const int nd = static_cast<int>(ov.loopD.size());
  const int ne = static_cast<int>(ov.loopE.size());
  for (int i = 0; i < ne; ++i) edgesOfE[pair_key(ov.loopE[i], ov.loopE[(i + 1) % ne])] = i;
  for (int i = 0; i < nd; ++i) edgesOfD[pair_key(ov.loopD[i], ov.loopD[(i + 1) % nd])] = i;

  enum Class { Inside, Outside, SharedSame, SharedOpp };
  std::size_t shared_opposite = 0;

  auto classify = [&](int u, int v, const std::unordered_map<std::int64_t, int>& otherEdges,
                      const PointList& otherPts) -> Class {
    if (otherEdges.count(pair_key(u, v))) return SharedSame;
    if (otherEdges.count(pair_key(v, u))) return SharedOpp;
    const Point mid = 0.5 * (nodes[u] + nodes[v]);
    if (boundary_distance(mid, otherPts) <= 2.0 * tau)
      throw NonGenericContact("boundary features closer than the point tolerance but not coincident");
    return point_in_loop(mid, otherPts) ? Inside : Outside;
  };

  std::vector<Class> classD(nd), classE(ne);
  for (int i = 0; i < nd; ++i) classD[i] = classify(ov.loopD[i], ov.loopD[(i + 1) % nd], edgesOfE, ov.ptsE);
  for (int i = 0; i < ne; ++i) classE[i] = classify(ov.loopE[i], ov.loopE[(i + 1) % ne], edgesOfD, ov.ptsD);
  for (int i = 0; i < nd; ++i)
    if (classD[i] == SharedOpp) ++shared_opposite;

  // Intersection boundary candidates.
  std::vector<TraceEdge> interEdges;
  for (int i = 0; i < nd; ++i) {
    if (classD[i] == Inside)
      interEdges.push_back({ov.loopD[i], ov.loopD[(i + 1) % nd], static_cast<int>(PieceKind::AlphaOnD)});
    else if (classD[i] == SharedSame)
      interEdges.push_back({ov.loopD[i], ov.loopD[(i + 1) % nd], static_cast<int>(PieceKind::Shared)});
  }
  for (int i = 0; i < ne; ++i)
    if (classE[i] == Inside)
      interEdges.push_back({ov.loopE[i], ov.loopE[(i + 1) % ne], static_cast<int>(PieceKind::BetaOnE)});

  auto cycles = trace_cycles(nodes, interEdges, &dec.warnings);

  struct RawComponent {
    std::vector<int> edgeIdx;
    double area;
  };
  std::vector<RawComponent> raw;
  for (auto& cyc : cycles) {
    const double a = cycle_area(nodes, interEdges, cyc);
    PointList poly;
    for (int e : cyc) poly.push_back(nodes[interEdges[e].u]);
    double perim = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) perim += (poly[(k + 1) % poly.size()] - poly[k]).norm();
    if (a <= tau * perim) {
      dec.warnings.push_back("discarded a boundary cycle thinner than the point tolerance");
      continue;
    }
    std::vector<int> seen;
    for (int e : cyc) seen.push_back(interEdges[e].u);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw NonGenericContact("intersection component pinched at a point");
    raw.push_back({std::move(cyc), a});
  }

  if (raw.empty()) {
    if (shared_opposite > 0)
      throw NonGenericContact("boundaries share arcs but bound no common interior");
    if (ov.contact_events > 0)
      dec.warnings.push_back("boundary contact without interior overlap; intersection is empty");
  }

  std::sort(raw.begin(), raw.end(), [&](const RawComponent& a, const RawComponent& b) {
    if (a.area != b.area) return a.area > b.area;
    PointList pa, pb;
    for (int e : a.edgeIdx) pa.push_back(nodes[interEdges[e].u]);
    for (int e : b.edgeIdx) pb.push_back(nodes[interEdges[e].u]);
    const Point ca = JordanDomain{pa}.centroid(), cb = JordanDomain{pb}.centroid();
    return ca.x() != cb.x() ? ca.x() < cb.x() : ca.y() < cb.y();
  });

  // Assemble components with provenance runs, rotated to start at a run break.
  for (const auto& rc : raw) {
    const int m = static_cast<int>(rc.edgeIdx.size());
    int start = 0;
    bool uniform = true;
    for (int k = 0; k < m; ++k) {
      const int prev = interEdges[rc.edgeIdx[(k + m - 1) % m]].payload;
      if (interEdges[rc.edgeIdx[k]].payload != prev) {
        start = k;
        uniform = false;
        break;
      }
    }
    IntersectionComponent comp;
    PointList poly;
    for (int k = 0; k < m; ++k) poly.push_back(nodes[interEdges[rc.edgeIdx[(start + k) % m]].u]);
    comp.region.boundary = poly;

    if (uniform) {
      BoundaryPiece piece;
      piece.kind = static_cast<PieceKind>(interEdges[rc.edgeIdx[0]].payload);
      piece.arc.pts = poly;
      piece.arc.closed = true;
      comp.pieces.push_back(std::move(piece));
    } else {
      int k = 0;
      while (k < m) {
        const int kind = interEdges[rc.edgeIdx[(start + k) % m]].payload;
        int kEnd = k;
        while (kEnd + 1 < m && interEdges[rc.edgeIdx[(start + kEnd + 1) % m]].payload == kind) ++kEnd;
        BoundaryPiece piece;
        piece.kind = static_cast<PieceKind>(kind);
        for (int q = k; q <= kEnd; ++q) piece.arc.pts.push_back(poly[q]);
        piece.arc.pts.push_back(poly[(kEnd + 1) % m]);
        comp.pieces.push_back(std::move(piece));
        k = kEnd + 1;
      }
    }
    dec.components.push_back(std::move(comp));
  }

  // Lobes: one per alpha/beta piece; the containment case yields a single annular lobe.
  for (int ci = 0; ci < static_cast<int>(dec.components.size()); ++ci) {
    const auto& comp = dec.components[ci];
    for (int pi = 0; pi < static_cast<int>(comp.pieces.size()); ++pi) {
      const auto& piece = comp.pieces[pi];
      if (piece.kind == PieceKind::Shared) continue;
      const bool alphaPiece = piece.kind == PieceKind::AlphaOnD;
      Lobe lobe;
      lobe.side = alphaPiece ? LobeSide::EOutsideD : LobeSide::DOutsideE;
      lobe.component = ci;
      lobe.piece = pi;
      lobe.inner = piece.arc;

      if (piece.arc.closed) {
        lobe.annular = true;
        lobe.outer.pts = alphaPiece ? ov.ptsE : ov.ptsD;
        lobe.outer.closed = true;
        lobe.region = alphaPiece ? E : D;
        dec.lobes.push_back(std::move(lobe));
        continue;
      }

      const std::vector<int>& farLoop = alphaPiece ? ov.loopE : ov.loopD;
      const int fn = static_cast<int>(farLoop.size());
      const int ia = find_node(farLoop, ov.weld.add(piece.arc.pts.front(), 1));
      const int ib = find_node(farLoop, ov.weld.add(piece.arc.pts.back(), 1));
      if (ia < 0 || ib < 0)
        throw NonGenericContact("arc endpoint missing from the far boundary while building lobes");
      PointList walk;
      for (int k = ia;; k = (k + 1) % fn) {
        walk.push_back(nodes[farLoop[k]]);
        if (!walk.empty() && k != ia) {
          const int u = farLoop[(k + fn - 1) % fn], v = farLoop[k];
          ctx.lobe_of.emplace(pair_key(u, v), static_cast<int>(dec.lobes.size()));
        }
        if (k == ib) break;
      }
      lobe.outer.pts = walk;

      PointList poly = walk;
      for (int q = static_cast<int>(piece.arc.pts.size()) - 2; q >= 1; --q) poly.push_back(piece.arc.pts[q]);
      if (polygon_signed_area(poly) <= 0.0)
        throw NonGenericContact("degenerate lobe while decomposing the boundary");
      lobe.region.boundary = std::move(poly);
      dec.lobes.push_back(std::move(lobe));
    }
  }

  // Union boundary with provenance.
  std::vector<TraceEdge> unionEdges;
  for (int i = 0; i < nd; ++i) {
    if (classD[i] == Outside)
      unionEdges.push_back({ov.loopD[i], ov.loopD[(i + 1) % nd], static_cast<int>(UnionEdgeSource::FromD)});
    else if (classD[i] == SharedSame)
      unionEdges.push_back({ov.loopD[i], ov.loopD[(i + 1) % nd], static_cast<int>(UnionEdgeSource::SharedBoth)});
  }
  for (int i = 0; i < ne; ++i)
    if (classE[i] == Outside)
      unionEdges.push_back({ov.loopE[i], ov.loopE[(i + 1) % ne], static_cast<int>(UnionEdgeSource::FromE)});

  auto ucycles = trace_cycles(nodes, unionEdges, &dec.warnings);
  int bestCycle = -1;
  double bestArea = 0.0;
  int positives = 0;
  for (int c = 0; c < static_cast<int>(ucycles.size()); ++c) {
    const double a = cycle_area(nodes, unionEdges, ucycles[c]);
    if (a > tau) ++positives;
    if (a > bestArea) {
      bestArea = a;
      bestCycle = c;
    }
  }
  dec.union_is_single_cycle = positives == 1;
  if (positives > 1) dec.warnings.push_back("union boundary is not a single cycle; kept the largest");
  if (bestCycle >= 0) {
    for (int e : ucycles[bestCycle]) {
      const TraceEdge& te = unionEdges[e];
      dec.union_outer.pts.push_back(nodes[te.u]);
      dec.union_outer.tags.push_back(static_cast<UnionEdgeSource>(te.payload));
      auto it = ctx.lobe_of.find(pair_key(te.u, te.v));
      dec.union_outer.lobe_of_edge.push_back(it == ctx.lobe_of.end() ? -1 : it->second);
    }
  }
  return dec;
}

std::vector<IntersectionComponent> intersect_domains(const JordanDomain& D, const JordanDomain& E,
                                                     std::vector<std::string>* warnings,
                                                     const Tolerances& tol) {
  Decomposition dec = decompose(D, E, tol);
  if (warnings) warnings->insert(warnings->end(), dec.warnings.begin(), dec.warnings.end());
  return std::move(dec.components);
}

std::vector<Lobe> lobes(const JordanDomain& D, const JordanDomain& E, const Tolerances& tol) {
  return decompose(D, E, tol).lobes;
}

}  // namespace planehomeo
