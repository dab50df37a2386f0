#pragma once

#include "planehomeo/pl_map.hpp"

namespace planehomeo {

// Piecewise-linear parameterization of a Jordan domain over the closed unit
// disk. map.evaluate: world -> disk, map.invert: disk -> world. The boundary
// goes to the unit circle by arclength, anchor A to (-1,0), anchor B to
// (+1,0), the counterclockwise chain A->B to the lower semicircle and the
// complementary chain to the upper one. Both circle chains are strictly
// monotone in x, so every vertical chord x = s meets each exactly once.
struct DiskChart {
  PLHomeo map;
  int anchor_a = -1;  // mesh vertex at (-1, 0)
  int anchor_b = -1;  // mesh vertex at (+1, 0)
};

// Interior positions solve a mean-value convex-combination system; the mesh
// is refined and re-solved until every parameter triangle is strictly CCW.
// Throws InvalidInput when an anchor is not a boundary point,
// MeshRefinementExceeded when the certificate never holds.
DiskChart schoenflies_chart(const JordanDomain& region, const Point& anchorA,
                            const Point& anchorB);

// Piecewise-linear parameterization of the annulus between two loops over the
// unit square, built on the annulus mesh cut open along a shortest mesh path
// from the inner loop to the outer one. The inner loop maps to the bottom
// edge (x = normalized arclength), the outer loop to the top edge, and the
// two seam copies to the left and right edges. Vertical parameter lines pull
// back to arcs joining the inner loop to the outer one.
struct AnnulusChart {
  PLHomeo map;
  std::vector<int> bottom;  // cut-mesh vertex ids along y=0, x ascending
  std::vector<int> right;   // along x=1, y ascending
  std::vector<int> top;     // along y=1, x descending
  std::vector<int> left;    // along x=0, y descending
};

AnnulusChart annulus_chart(const PointList& inner, const PointList& outer, double target_edge);

}  // namespace planehomeo
