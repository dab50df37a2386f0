#pragma once

#include "planehomeo/jordan.hpp"

#include <random>
#include <utility>
#include <vector>

// Test-side oracles, independent of the production boolean/tracing code paths.
namespace testsupport {

using planehomeo::Point;
using planehomeo::PointList;

// Exact orientation sign via arbitrary-precision rationals.
int rational_orient(const Point& a, const Point& b, const Point& c);

// Deterministic uniforms built directly on the engine's bit stream (the standard
// distributions are implementation-defined, which would break frozen seeds).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline double uniform_in(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * uniform01(rng);
}
inline int uniform_int(std::mt19937_64& rng, int a, int b) {
  return a + static_cast<int>(rng() % static_cast<std::uint64_t>(b - a + 1));
}

// Raster view of D∩E on a grid of cell centers over the padded joint bounding box.
// Connectivity is resolved at two-cell resolution (cells within Chebyshev distance 2
// join one component); areas are integrated from 16 exact scanline sub-rows per cell
// row, so their error is far below one cell. `deep_points[k]` is the center of the
// cell of component k farthest from the component's raster boundary.
struct RasterComponents {
  int count = 0;
  double cell_area = 0.0;
  double cell_max = 0.0;  // max(cell width, cell height)
  std::vector<double> areas;
  std::vector<Point> deep_points;
};

RasterComponents raster_intersection(const PointList& dLoop, const PointList& eLoop, int grid = 1024);

// Star polygon: vertices at jittered angles around `center` with radii in
// [rmin, rmax]; always simple.
PointList star_polygon(std::mt19937_64& rng, const Point& center, double rmin, double rmax,
                       int nmin, int nmax);

// Overlapping star-polygon pair in generic position for the raster comparison:
// resamples until the intersection exists, decomposes without warnings, every
// component admits an inscribed disk of radius 3 raster cells, and distinct
// components are at least 6 cells apart.
std::pair<PointList, PointList> random_star_pair(std::mt19937_64& rng, int grid = 1024);

// Degree of a closed polygon around the origin by exact signed counting of its
// crossings of the positive x-axis. The origin must not lie on the polygon.
int crossing_degree(const PointList& loop);

}  // namespace testsupport
