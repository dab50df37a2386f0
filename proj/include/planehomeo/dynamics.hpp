#pragma once

#include "planehomeo/pl_map.hpp"

#include <limits>
#include <string>
#include <vector>

namespace planehomeo {

// Axis-aligned box whose boundary carries a certified nonzero displacement
// degree, plus a refined witness inside it. A nonzero winding on a boundary
// where f(x) != x proves the box contains a fixed point of the map.
struct FixedPointCertificate {
  Box box;
  int winding = 0;
  Point witness = Point::Zero();
  double residual = std::numeric_limits<double>::infinity();  // |f(witness) - witness|
  double tol = 0.0;  // requested box-diameter resolution
};

struct FixedPointSearch {
  std::vector<FixedPointCertificate> certificates;
  // Minimum sampled |f(x) - x| over every point the search evaluated. An empty
  // certificate list is a sampled verdict whose strength is this margin.
  double margin = std::numeric_limits<double>::infinity();
  long long boxesProcessed = 0;
};

struct SearchBudget {
  long long maxBoxes = 40000;
  // Zero-winding boxes are still subdivided this many levels below the root,
  // so that fixed points of opposite index that cancel on a coarse boundary
  // are separated before the winding-guided descent takes over.
  int exploreLevels = 6;
};

struct BudgetExceeded : Error {
  FixedPointSearch partial;
  BudgetExceeded(const std::string& msg, FixedPointSearch p) : Error(msg), partial(std::move(p)) {}
};

// Winding number of x -> f(x) - x along a closed curve, by angle accumulation
// with adaptive refinement until every increment is below pi/4. The
// displacement must stay well clear of zero: its minimum over the samples has
// to exceed ten times its largest change between adjacent samples, otherwise
// MarginTooSmall. Throws PreconditionViolation where f is undefined on the
// curve.
int displacement_winding(const MapHandle& f, const PolyArc& curve);

// Quadtree fixed-point search over a region. Boxes with nonzero boundary
// winding are subdivided to diameter <= tol and then refined by bisection on
// the displacement field into a witness. Boxes where the winding is
// unavailable (map undefined across the edge, margin too small) subdivide to
// the same floor and only feed the sampled margin. Throws BudgetExceeded
// carrying the partial result.
FixedPointSearch find_fixed_points(const MapHandle& f, const JordanDomain& region, double tol,
                                   const SearchBudget& budget = {});
FixedPointSearch find_fixed_points(const MapHandle& f, const IntersectionComponent& C, double tol,
                                   const SearchBudget& budget = {});

// Per-cell first exit time of the cell-center orbit from the closed component
// (boundary membership counts as inside).
struct EscapeField {
  static constexpr int kNonEscaping = -1;  // orbit stayed for all maxIter steps
  static constexpr int kOutsideCell = -2;  // cell center not in the component

  Box box;
  int nx = 0, ny = 0;
  std::vector<int> times;  // row-major, y-major rows; values >= 1, or a marker
  int maxIter = 0;

  Point cell_center(int ix, int iy) const {
    return {box.lo.x() + (ix + 0.5) * box.width() / nx,
            box.lo.y() + (iy + 0.5) * box.height() / ny};
  }
};

EscapeField escape_map(const MapHandle& f, const IntersectionComponent& C, int gridN,
                       int maxIter = 1000);

struct PeriodicOrbitReport {
  int k = 0;
  PointList orbitPoints;   // p, f(p), ..., f^{k-1}(p)
  double residual = 0.0;   // |f^k(p) - p|
  std::vector<int> componentItinerary;  // containing component id per step, -1 when none
  FixedPointCertificate certificate;    // certificate of the k-th power at p
};

struct PeriodicSearchOptions {
  // Restrict the search to points whose first k-1 images stay in the
  // component, per the single-component orbit hypothesis.
  bool itineraryFilter = true;
  // Components used to label the itinerary; when null, labels are 0 inside
  // the searched component and -1 elsewhere.
  const std::vector<IntersectionComponent>* components = nullptr;
  SearchBudget budget{};
};

// Fixed points of the k-th power inside C, with divisor periods filtered out
// and one report per distinct orbit.
std::vector<PeriodicOrbitReport> find_periodic(const MapHandle& f, const IntersectionComponent& C,
                                               int k, double tol,
                                               const PeriodicSearchOptions& opt = {});
std::vector<PeriodicOrbitReport> find_periodic(const PLHomeo& f, const IntersectionComponent& C,
                                               int k, double tol,
                                               const PeriodicSearchOptions& opt = {});

struct FreeDiskReport {
  bool preconditionHolds = false;  // F(U) and U are disjoint
  bool free = false;               // images F^i(U), 0 <= i < j <= n, pairwise disjoint
  int witnessI = -1, witnessJ = -1;
  Point witness = Point::Zero();
};

// Checks pairwise disjointness of the first n forward images of U under F by
// polygon tests on the sampled image boundaries. The precondition
// F(U) cap U = empty is verified first; when it fails the report says so and
// no further pairs are tested.
FreeDiskReport free_disk_check(const MapHandle& F, const JordanDomain& U, int n);

struct TheoremVerdict {
  enum class Verdict { Consistent, Inconsistent, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::vector<PeriodicOrbitReport> periodic;  // itinerary-filtered, periods 1..kMax
  FixedPointSearch fixedPoints;
  int kMax = 6;
  std::string detail;  // reproduction data for non-consistent verdicts
};

// Searches periodic orbits with periods up to kMax staying in C and fixed
// points in C. Consistent when no such orbit exists or a fixed point is
// certified; an inconsistent verdict indicates a software defect and carries
// reproduction data. Budget exhaustion yields Inconclusive.
TheoremVerdict theorem_verdict(const MapHandle& f, const IntersectionComponent& C, int kMax = 6,
                               double tol = 0.0, const SearchBudget& budget = {});
TheoremVerdict theorem_verdict(const PLHomeo& f, const IntersectionComponent& C, int kMax = 6,
                               double tol = 0.0, const SearchBudget& budget = {});

}  // namespace planehomeo
