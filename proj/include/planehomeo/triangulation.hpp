#pragma once

#include "planehomeo/jordan.hpp"

#include <array>
#include <vector>

namespace planehomeo {

// Conforming triangle mesh of a polygonal region. Triangles are CCW index
// triples; interior edges are shared by exactly two triangles with opposite
// orientation. boundary_loop lists the outer boundary vertices in CCW order;
// inner_loop is empty for disks and holds the hole boundary (CCW as a polygon)
// for annular meshes.
struct Triangulation {
  PointList vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_loop;
  std::vector<int> inner_loop;
};

// Barycentric coordinates of x with respect to triangle (a, b, c).
std::array<double, 3> barycentric(const Point& a, const Point& b, const Point& c, const Point& x);

// Mesh a Jordan domain with edges no longer than target_edge. Original
// polygon vertices are kept exactly; required_interior points (strictly
// inside) become mesh vertices, also kept exactly.
Triangulation mesh_domain(const JordanDomain& dom, double target_edge,
                          const PointList& required_interior = {});

// Mesh the region between two nested loops (outer CCW polygon containing the
// CCW inner polygon). boundary_loop is the outer cycle, inner_loop the inner.
Triangulation mesh_annulus(const PointList& inner, const PointList& outer, double target_edge);

// Structural audit: CCW triangles, conforming edges, boundary cycles match
// the stored loops. Throws InvalidGeometry with a description on violation.
void validate_mesh(const Triangulation& mesh);

// Uniform-grid point location over a triangle soup. find() returns the
// lowest-index triangle whose closed extent contains x (exact predicates),
// or -1. find_near() additionally accepts points within tau of some triangle
// and returns clamped barycentric coordinates.
class TriangleLocator {
 public:
  TriangleLocator(const PointList& verts, const std::vector<std::array<int, 3>>& tris);

  int find(const Point& x) const;
  int find_near(const Point& x, double tau, std::array<double, 3>* bary = nullptr) const;

 private:
  const PointList& verts_;
  const std::vector<std::array<int, 3>>& tris_;
  Box box_;
  int nx_ = 1, ny_ = 1;
  double cw_ = 1.0, ch_ = 1.0;
  std::vector<std::vector<int>> cells_;

  void cell_range(const Box& b, int& x0, int& x1, int& y0, int& y1) const;
};

}  // namespace planehomeo
