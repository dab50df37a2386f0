#include "planehomeo/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace planehomeo {
namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
constexpr int kRingSides = 64;
constexpr int kChordSamples = 24;
constexpr int kRadialSamples = 40;

// Crossing of the vertical line x = s with a polyline stored in ascending x.
Point chain_point(const PointList& chain, double s) {
  s = std::clamp(s, chain.front().x(), chain.back().x());
  const auto it = std::lower_bound(chain.begin(), chain.end(), s,
                                   [](const Point& p, double v) { return p.x() < v; });
  if (it == chain.begin()) return chain.front();
  if (it == chain.end()) return chain.back();
  const Point& a = *(it - 1);
  const Point& b = *it;
  const double dx = b.x() - a.x();
  if (!(dx > 0.0)) return a;
  return a + ((s - a.x()) / dx) * (b - a);
}

// First crossing of the ray c + r*dir (r > 0) with a closed polygon.
Point ray_hit_polygon(const Point& c, const Point& dir, const PointList& poly) {
  const int n = static_cast<int>(poly.size());
  double bestR = std::numeric_limits<double>::infinity();
  Point hit = Point::Zero();
  for (int i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point e = poly[(i + 1) % n] - a;
    const double denom = cross2(dir, e);
    if (denom == 0.0) continue;
    const double r = cross2(a - c, e) / denom;
    const double w = cross2(a - c, dir) / denom;
    if (r > 0.0 && r < bestR && w >= -1e-12 && w <= 1.0 + 1e-12) {
      bestR = r;
      hit = a + std::clamp(w, 0.0, 1.0) * e;
    }
  }
  if (!std::isfinite(bestR)) throw PartitionFailure("radial ray missed the truncation polygon");
  return hit;
}

// For a lobe on the E side the chord runs from the D boundary outward, so the
// D measure spans it and the E measure starts at zero on the union boundary.
void assign_sides(ResolvedArc& ra, LobeSide side, const Point& innerWorld) {
  if (side == LobeSide::EOutsideD) {
    ra.pD = innerWorld;
    ra.pE = ra.z;
    ra.chordD = ra.chordLen;
    ra.chordE = 0.0;
  } else {
    ra.pE = innerWorld;
    ra.pD = ra.z;
    ra.chordE = ra.chordLen;
    ra.chordD = 0.0;
  }
}

}  // namespace

ResolvedArc ArcPartition::resolve_at_union(const Point& z, int edgeHint) const {
  int edge = edgeHint;
  if (edge < 0) edge = union_edge_at(boundary_parameter(z, dec.union_outer.pts) * unionLength);
  ResolvedArc ra;
  ra.z = z;
  const auto qr = ringFwd(z);
  if (!qr) throw PartitionFailure("union boundary point missed the ring chart");
  ra.u = qr->x();
  ra.lobe = dec.union_outer.lobe_of_edge[edge];
  if (ra.lobe < 0) {
    if (dec.union_outer.tags[edge] != UnionEdgeSource::SharedBoth)
      throw PartitionFailure("union edge without a lobe is not shared");
    ra.pD = z;
    ra.pE = z;
    return ra;
  }
  const LobeChartData& lc = lobeCharts[ra.lobe];
  const auto q = lc.fwd(z);
  if (!q) throw PartitionFailure("union boundary point missed its lobe chart");
  ra.s = q->x();
  ra.chordOuter = *q;
  ra.chordInner = chain_point(lc.upper, ra.s);
  ra.chordLen = (ra.chordOuter - ra.chordInner).norm();
  const auto wi = lc.inv(ra.chordInner);
  if (!wi) throw PartitionFailure("chord endpoint missed its lobe chart");
  assign_sides(ra, dec.lobes[ra.lobe].side, *wi);
  return ra;
}

ResolvedArc ArcPartition::resolve_at_target(const Point& w, bool onE) const {
  for (int li = 0; li < static_cast<int>(dec.lobes.size()); ++li) {
    const LobeChartData& lc = lobeCharts[li];
    const auto q = lc.fwd(w);
    if (!q) continue;
    // The named boundary meets this lobe along one of its two chains: it is
    // the inner chain when the lobe carries the other domain's excess.
    const LobeSide side = dec.lobes[li].side;
    const bool onInner = onE ? (side == LobeSide::DOutsideE) : (side == LobeSide::EOutsideD);
    ResolvedArc ra;
    ra.lobe = li;
    ra.s = q->x();
    Point innerWorld;
    if (onInner) {
      ra.chordInner = *q;
      ra.chordOuter = chain_point(lc.lower, ra.s);
      const auto z = lc.inv(ra.chordOuter);
      if (!z) throw PartitionFailure("chord endpoint missed its lobe chart");
      ra.z = *z;
      innerWorld = w;
    } else {
      ra.chordOuter = *q;
      ra.chordInner = chain_point(lc.upper, ra.s);
      ra.z = w;
      const auto wi = lc.inv(ra.chordInner);
      if (!wi) throw PartitionFailure("chord endpoint missed its lobe chart");
      innerWorld = *wi;
    }
    ra.chordLen = (ra.chordOuter - ra.chordInner).norm();
    const auto qr = ringFwd(ra.z);
    if (!qr) throw PartitionFailure("lobe outer point missed the ring chart");
    ra.u = qr->x();
    assign_sides(ra, side, innerWorld);
    return ra;
  }
  // No lobe claims w, so it must sit on a stretch shared by both boundaries,
  // which lies on the union boundary.
  const Box bb = bbox_of(dec.union_outer.pts);
  if (boundary_distance(w, dec.union_outer.pts) > 1e3 * default_tolerances().pt(bb))
    throw PartitionFailure("boundary point is on no lobe and no shared stretch");
  return resolve_at_union(w);
}

ArcPartition::Measure ArcPartition::measure(const Point& x) const {
  const Tolerances& tol = default_tolerances();
  if (locate(x, dec.components[0].region) == Location::Inside)
    throw InsideIntersection("point lies inside the core overlap");
  for (int li = 0; li < static_cast<int>(dec.lobes.size()); ++li) {
    const LobeChartData& lc = lobeCharts[li];
    const auto q = lc.fwd(x);
    if (!q) continue;
    ResolvedArc ra;
    ra.lobe = li;
    ra.s = q->x();
    ra.chordInner = chain_point(lc.upper, ra.s);
    ra.chordOuter = chain_point(lc.lower, ra.s);
    ra.chordLen = (ra.chordOuter - ra.chordInner).norm();
    const auto z = lc.inv(ra.chordOuter);
    if (!z) throw PartitionFailure("chord endpoint missed its lobe chart");
    ra.z = *z;
    const auto qr = ringFwd(ra.z);
    if (!qr) throw PartitionFailure("lobe outer point missed the ring chart");
    ra.u = qr->x();
    const auto wi = lc.inv(ra.chordInner);
    if (!wi) throw PartitionFailure("chord endpoint missed its lobe chart");
    assign_sides(ra, dec.lobes[li].side, *wi);
    Measure m;
    m.arc = ra;
    const double along = (*q - ra.chordInner).norm();
    if (dec.lobes[li].side == LobeSide::EOutsideD) {
      m.lambdaD = along;
      m.lambdaE = boundary_distance(x, E.boundary) <= tol.pt(E.bbox()) ? 0.0 : kUndefined;
    } else {
      m.lambdaE = along;
      m.lambdaD = boundary_distance(x, D.boundary) <= tol.pt(D.bbox()) ? 0.0 : kUndefined;
    }
    return m;
  }
  const auto qr = ringFwd(x);
  if (qr) {
    const double t = std::clamp(qr->y(), 0.0, 1.0);
    const auto z0 = ringInv(Point(qr->x(), 0.0));
    if (!z0) throw PartitionFailure("ring floor point missed the ring chart");
    Measure m;
    m.arc = resolve_at_union(*z0);
    m.arc.u = qr->x();
    m.lambdaD = m.arc.chordD + radialScale * t;
    m.lambdaE = m.arc.chordE + radialScale * t;
    return m;
  }
  const Point d = x - center;
  const double rr = d.norm();
  if (rr < R * std::cos(std::numbers::pi / kRingSides) * (1.0 - 1e-9))
    throw PartitionFailure("point inside the truncation polygon escaped every chart");
  const Point base = ray_hit_polygon(center, d / rr, ringOuter);
  const auto qb = ringFwd(base);
  if (!qb) throw PartitionFailure("truncation polygon point missed the ring chart");
  const auto z0 = ringInv(Point(qb->x(), 0.0));
  if (!z0) throw PartitionFailure("ring floor point missed the ring chart");
  Measure m;
  m.arc = resolve_at_union(*z0);
  m.arc.u = qb->x();
  const double extra = (x - base).norm() * (radialScale / R);
  m.lambdaD = m.arc.chordD + radialScale + extra;
  m.lambdaE = m.arc.chordE + radialScale + extra;
  return m;
}

Point ArcPartition::point_at_lambda(const ResolvedArc& a, bool onE, double v) const {
  const double off = onE ? a.chordE : a.chordD;
  if (a.lobe >= 0 && off > 0.0 && v < off) {
    const double f = std::clamp(v / off, 0.0, 1.0);
    const auto y = lobeCharts[a.lobe].inv(a.chordInner + f * (a.chordOuter - a.chordInner));
    if (!y) throw PartitionFailure("chord point missed its lobe chart");
    return *y;
  }
  const double w = std::max(v - off, 0.0);
  if (w <= radialScale) {
    const auto y = ringInv(Point(a.u, w / radialScale));
    if (!y) throw PartitionFailure("radial point missed the ring chart");
    return *y;
  }
  const auto base = ringInv(Point(a.u, 1.0));
  if (!base) throw PartitionFailure("radial point missed the ring chart");
  const Point dir = (*base - center).normalized();
  return *base + ((w - radialScale) * (R / radialScale)) * dir;
}

int ArcPartition::union_edge_at(double fracLen) const {
  const int n = static_cast<int>(dec.union_outer.pts.size());
  fracLen = std::clamp(fracLen, 0.0, unionLength);
  const auto it = std::upper_bound(unionCum.begin(), unionCum.end(), fracLen);
  const int idx = static_cast<int>(it - unionCum.begin()) - 1;
  return std::clamp(idx, 0, n - 1);
}

int ArcPartition::nearest_arc(const Point& z) const {
  const int n = static_cast<int>(arcs.size());
  const int k = static_cast<int>(std::floor(boundary_parameter(z, dec.union_outer.pts) * n));
  return std::clamp(k, 0, n - 1);
}

ArcPartition build_partition(const JordanDomain& D, const JordanDomain& E, double R, int density) {
  Decomposition dec = decompose(D, E);
  if (dec.components.size() != 1)
    throw NotConnectedIntersection("expected one overlap component, found " +
                                   std::to_string(dec.components.size()));
  for (const Lobe& lb : dec.lobes)
    if (lb.annular) throw ContainmentViolation("one domain contains the other");
  if (!dec.union_is_single_cycle) throw PartitionFailure("union boundary is not a single cycle");

  const PointList& U = dec.union_outer.pts;
  const int n = static_cast<int>(U.size());
  double diam = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diam = std::max(diam, (U[i] - U[j]).norm());
  if (R <= 0.0) {
    R = 3.0 * diam;
  } else if (R < 3.0 * diam * (1.0 - 1e-12)) {
    throw InvalidInput("truncation radius below three times the union diameter");
  }
  const Point center = bbox_of(U).center();

  PointList ringOuter(kRingSides);
  for (int k = 0; k < kRingSides; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kRingSides;
    ringOuter[k] = center + R * Point(std::cos(a), std::sin(a));
  }

  std::vector<LobeChartData> lobeCharts;
  lobeCharts.reserve(dec.lobes.size());
  for (const Lobe& lb : dec.lobes) {
    DiskChart dc = schoenflies_chart(lb.region, lb.inner.pts.front(), lb.inner.pts.back());
    const std::vector<int>& loop = dc.map.source().boundary_loop;
    const PointList& tp = dc.map.target_positions();
    const int m = static_cast<int>(loop.size());
    int ia = -1, ib = -1;
    for (int i = 0; i < m; ++i) {
      if (loop[i] == dc.anchor_a) ia = i;
      if (loop[i] == dc.anchor_b) ib = i;
    }
    if (ia < 0 || ib < 0) throw PartitionFailure("chart anchor missing from the mesh boundary");
    // Walking the boundary counterclockwise from anchor A gives the chain on
    // the lower semicircle (the lobe's outer side); the rest is the upper one.
    PointList lower, upper;
    for (int i = ia;; i = (i + 1) % m) {
      lower.push_back(tp[loop[i]]);
      if (i == ib) break;
    }
    for (int i = ib;; i = (i + 1) % m) {
      upper.push_back(tp[loop[i]]);
      if (i == ia) break;
    }
    std::reverse(upper.begin(), upper.end());
    LobeChartData lc{std::move(dc), std::move(lower), std::move(upper), {}, {}};
    lc.fwd = lc.chart.map.as_map();
    lc.inv = lc.chart.map.as_inverse_map();
    lobeCharts.push_back(std::move(lc));
  }

  AnnulusChart ring = annulus_chart(U, ringOuter, R / 8.0);
  MapHandle ringFwd = ring.map.as_map();
  MapHandle ringInv = ring.map.as_inverse_map();

  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + (U[(i + 1) % n] - U[i]).norm();
  const double L = cum[n];
  if (!(L > 0.0)) throw PartitionFailure("union boundary has zero length");

  ArcPartition P{.D = D,
                 .E = E,
                 .dec = std::move(dec),
                 .center = center,
                 .R = R,
                 .radialScale = 4.0,
                 .density = density,
                 .ringOuter = std::move(ringOuter),
                 .lobeCharts = std::move(lobeCharts),
                 .ring = std::move(ring),
                 .ringFwd = std::move(ringFwd),
                 .ringInv = std::move(ringInv),
                 .arcs = {},
                 .unionLength = L,
                 .unionCum = std::move(cum)};

  const int nArcs = std::max(16, static_cast<int>(std::ceil(static_cast<double>(density) * L)));
  const PolyArc Uloop{P.dec.union_outer.pts, true};
  P.arcs.reserve(nArcs);
  for (int k = 0; k < nArcs; ++k) {
    const double t = (k + 0.5) / nArcs;
    const Point z = Uloop.at(t);
    const int edge = P.union_edge_at(t * L);
    const ResolvedArc ra = P.resolve_at_union(z, edge);
    Arc a;
    a.id = k;
    a.z = z;
    a.lobe = ra.lobe;
    a.unionEdge = edge;
    a.pD = ra.pD;
    a.pE = ra.pE;
    PointList pts;
    if (ra.lobe >= 0) {
      a.zIndex = kChordSamples - 1;
      const bool dSide = P.dec.lobes[ra.lobe].side == LobeSide::EOutsideD;
      for (int j = 0; j < kChordSamples; ++j) {
        const double f = static_cast<double>(j) / (kChordSamples - 1);
        Point wpt;
        if (j == 0) {
          wpt = dSide ? ra.pD : ra.pE;
        } else if (j == kChordSamples - 1) {
          wpt = z;
        } else {
          const auto y =
              P.lobeCharts[ra.lobe].inv(ra.chordInner + f * (ra.chordOuter - ra.chordInner));
          if (!y) throw PartitionFailure("chord sample missed its lobe chart");
          wpt = *y;
        }
        pts.push_back(wpt);
        const double along = f * ra.chordLen;
        const bool atOuter = j == kChordSamples - 1;
        if (dSide) {
          a.lambdaD.push_back(along);
          a.lambdaE.push_back(atOuter ? 0.0 : kUndefined);
        } else {
          a.lambdaE.push_back(along);
          a.lambdaD.push_back(atOuter ? 0.0 : kUndefined);
        }
      }
    } else {
      a.zIndex = 0;
      pts.push_back(z);
      a.lambdaD.push_back(0.0);
      a.lambdaE.push_back(0.0);
    }
    for (int j = 1; j <= kRadialSamples; ++j) {
      const double tv = static_cast<double>(j) / kRadialSamples;
      const auto y = P.ringInv(Point(ra.u, tv));
      if (!y) throw PartitionFailure("radial sample missed the ring chart");
      pts.push_back(*y);
      a.lambdaD.push_back(ra.chordD + P.radialScale * tv);
      a.lambdaE.push_back(ra.chordE + P.radialScale * tv);
    }
    a.pts = PolyArc{std::move(pts), false};
    P.arcs.push_back(std::move(a));
  }
  return P;
}

ArcQuery project_and_measure(const ArcPartition& P, const Point& x) {
  if ((x - P.center).norm() > P.R + default_tolerances().pt(bbox_of(P.ringOuter)))
    throw OutsideTruncation("query point beyond the truncation circle");
  const ArcPartition::Measure m = P.measure(x);
  ArcQuery q;
  q.arcId = P.nearest_arc(m.arc.z);
  q.piD = m.arc.pD;
  q.piE = m.arc.pE;
  q.lambdaD = m.lambdaD;
  q.lambdaE = m.lambdaE;
  q.insideD = std::isnan(m.lambdaD);
  q.insideE = std::isnan(m.lambdaE);
  return q;
}

}  // namespace planehomeo
