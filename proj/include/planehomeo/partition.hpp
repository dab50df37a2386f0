#pragma once

#include "planehomeo/chart.hpp"
#include "planehomeo/intersection.hpp"

#include <optional>

namespace planehomeo {

// One sampled transport arc. It starts on the boundary of the intersection,
// runs through a lobe along a chord of that lobe's disk chart (when a lobe
// carries it), reaches the union boundary at z, and continues outward along
// the pullback of a radial line to the truncation circle. Samples are ordered
// inward to outward; lambdaD/lambdaE are the two pseudo-arclength measures in
// chart units (zero where the arc crosses the respective boundary, NaN where
// the measure is undefined because the point lies strictly inside that domain).
struct Arc {
  int id = 0;
  Point z = Point::Zero();  // basepoint on the union boundary
  int lobe = -1;            // index into the decomposition's lobes, -1 when z
                            // sits on a shared stretch of both boundaries
  int unionEdge = 0;        // union-boundary edge carrying z
  int zIndex = 0;           // position of z within pts
  PolyArc pts;
  std::vector<double> lambdaD, lambdaE;
  Point pD = Point::Zero(), pE = Point::Zero();  // crossings with the two boundaries
};

// The continuous arc through a query point, resolved in chart coordinates.
// Plumbing for evaluation: chordInner/chordOuter live in the lobe chart's
// parameter disk (inner = intersection side), z and the p's in the world.
struct ResolvedArc {
  int lobe = -1;
  double s = 0.0;  // chord abscissa in the lobe chart
  Point chordInner = Point::Zero(), chordOuter = Point::Zero();
  double chordLen = 0.0;
  double chordD = 0.0, chordE = 0.0;  // lambda offsets accumulated at z
  Point z = Point::Zero();
  double u = 0.0;  // ring-chart abscissa of z
  Point pD = Point::Zero(), pE = Point::Zero();
};

struct ArcQuery {
  int arcId = 0;
  Point piD = Point::Zero(), piE = Point::Zero();
  double lambdaD = 0.0, lambdaE = 0.0;  // NaN where undefined
  bool insideD = false, insideE = false;
};

// Chart of one lobe: the disk chart plus its two boundary chains in parameter
// space, both stored with ascending abscissa so vertical chords resolve by
// binary search. The chain on the intersection side is the upper semicircle.
struct LobeChartData {
  DiskChart chart;
  PointList lower, upper;  // parameter positions along each chain
  MapHandle fwd, inv;
};

class ArcPartition {
 public:
  JordanDomain D, E;
  Decomposition dec;
  Point center = Point::Zero();  // truncation circle center
  double R = 0.0;
  double radialScale = 4.0;  // model length assigned to each full radial segment
  int density = 256;
  PointList ringOuter;  // truncation circle polygon
  std::vector<LobeChartData> lobeCharts;
  AnnulusChart ring;
  MapHandle ringFwd, ringInv;
  std::vector<Arc> arcs;
  double unionLength = 0.0;
  std::vector<double> unionCum;  // cumulative edge lengths over the union boundary

  struct Measure {
    ResolvedArc arc;
    double lambdaD = 0.0, lambdaE = 0.0;  // NaN where undefined
  };

  // Resolves the arc whose basepoint is z on the given union edge (-1: locate
  // the edge from z).
  ResolvedArc resolve_at_union(const Point& z, int edgeHint = -1) const;
  // Resolves the arc through a point w of the E boundary (onE) or D boundary.
  ResolvedArc resolve_at_target(const Point& w, bool onE) const;
  // Locates x on its arc and measures both lambdas. Throws InsideIntersection.
  // Points beyond the truncation circle continue along the straight radial ray.
  Measure measure(const Point& x) const;
  // The point on arc `a` at the prescribed lambda value (E side when onE).
  Point point_at_lambda(const ResolvedArc& a, bool onE, double v) const;

  int union_edge_at(double fracLen) const;  // edge index from arclength along the boundary
  int nearest_arc(const Point& z) const;
};

// Builds the arc family for the pair (D, E): disk-chart chords inside every
// lobe, radial pullbacks between the union boundary and the truncation circle
// of radius R (default 3x the union diameter) centered at the union bbox
// center, at `density` arcs per unit of union-boundary length.
// Throws NotConnectedIntersection, ContainmentViolation, InvalidInput (R too
// small), PartitionFailure; chart failures propagate.
ArcPartition build_partition(const JordanDomain& D, const JordanDomain& E, double R = 0.0,
                             int density = 256);

// Projects x along its arc onto both boundaries and reports both measures.
// Throws InsideIntersection (x strictly inside D∩E) and OutsideTruncation.
ArcQuery project_and_measure(const ArcPartition& P, const Point& x);

}  // namespace planehomeo
