#pragma once

#include "planehomeo/core.hpp"
#include "planehomeo/predicates.hpp"

namespace planehomeo {

// Open polyline arc (or closed loop when closed == true). Vertices are ordered;
// a closed arc does not repeat its first vertex.
struct PolyArc {
  PointList pts;
  bool closed = false;

  double length() const;
  // Point at normalized arclength t in [0, 1] (closed arcs wrap).
  Point at(double t) const;
  PolyArc reversed() const;
};

// Compact region bounded by one simple closed polyline, counterclockwise.
// The closing edge back to boundary.front() is implicit.
struct JordanDomain {
  PointList boundary;

  double area() const;          // positive for a valid domain
  double perimeter() const;
  Box bbox() const;
  Point centroid() const;       // area centroid
};

double polygon_signed_area(const PointList& loop);

// Builds a JordanDomain from raw vertices: drops consecutive duplicates (within the
// point tolerance), reverses clockwise input, rejects self-intersecting or
// degenerate loops. Throws SelfIntersection / DegenerateArea.
JordanDomain validate_jordan(const PointList& vertices, const Tolerances& tol = default_tolerances());

// Simplicity test used by validate_jordan; returns the witness segment pair on failure.
std::optional<std::pair<int, int>> find_self_intersection(const PointList& loop);

// Location of x relative to the closed region: Boundary iff the distance to the
// boundary polyline is at most tau (default: tolerance of the domain bbox).
Location locate(const Point& x, const JordanDomain& dom, double tau = -1.0,
                const Tolerances& tol = default_tolerances());

// Parity-only interior test against a closed loop (no boundary band).
bool point_in_loop(const Point& x, const PointList& loop);

double boundary_distance(const Point& x, const PointList& loop, bool closed = true);

// Normalized arclength parameter in [0, 1) of the boundary point nearest to x.
double boundary_parameter(const Point& x, const PointList& loop);

// Inserts vertices so that no boundary edge of the loop is longer than max_edge.
PointList densify_loop(const PointList& loop, double max_edge);

// True if the cyclic order of parameters (s0, s1, s2) on a circle of circumference 1
// is counterclockwise (s1 lies on the positively oriented arc from s0 to s2... from
// s0 forward, s1 is reached before s2).
bool cyclic_before(double s0, double s1, double s2);

}  // namespace planehomeo
