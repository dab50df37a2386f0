#pragma once

#include "planehomeo/core.hpp"

namespace planehomeo {

// Sign of the signed area of the triangle (a, b, c): +1 counterclockwise, -1
// clockwise, 0 exactly collinear. The sign is exact for all finite IEEE double
// inputs: a filtered evaluation falls back to error-free expansion arithmetic,
// or to rational arithmetic when an exponent is extreme enough to defeat the
// expansions. Throws InvalidGeometry on NaN or infinite coordinates.
int orient(const Point& a, const Point& b, const Point& c);

// True when p lies exactly on the closed segment [a, b].
bool on_segment(const Point& a, const Point& b, const Point& p);

// Squared distance from p to the closed segment [a, b] (rounded arithmetic).
double segment_distance_sq(const Point& a, const Point& b, const Point& p);

inline double segment_distance(const Point& a, const Point& b, const Point& p) {
  return std::sqrt(segment_distance_sq(a, b, p));
}

// Distance between two closed segments (0 when they intersect, checked exactly).
double segment_segment_distance(const Point& a0, const Point& a1, const Point& b0, const Point& b1);

// True when the closed segments [a0,a1] and [b0,b1] share at least one point.
bool segments_touch(const Point& a0, const Point& a1, const Point& b0, const Point& b1);

}  // namespace planehomeo
