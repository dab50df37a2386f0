#pragma once

#include "planehomeo/jordan.hpp"

#include <vector>

namespace planehomeo {

// Connected components of the closed eps-neighborhood of a finite union of closed
// polylines (polygons, segments, or single points). Two base sets land in the same
// component exactly when a chain of sets links them with pairwise set distance
// <= 2*eps. Only connectivity is contractual; offset boundaries are not produced.
struct EpsilonNeighborhood {
  std::vector<PointList> base;
  double epsilon = 0.0;
  std::vector<int> component_of;  // one id per base set, ids dense from 0
  int component_count = 0;
};

EpsilonNeighborhood epsilon_components(const std::vector<PointList>& base, double eps);

// Euclidean distance between two closed polylines (0 when they touch, overlap, or
// one contains the other).
double set_distance(const PointList& a, const PointList& b);

// Half the set distance between two disjoint polygonal sets: every eps below the
// returned value keeps them in distinct components of the eps-neighborhood.
// Touching or overlapping inputs raise InvalidInput.
double separation_threshold(const PointList& a, const PointList& b);

}  // namespace planehomeo
