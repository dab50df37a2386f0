#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace planehomeo {

using Point = Eigen::Vector2d;
using PointList = std::vector<Point>;

inline double cross2(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Box {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void expand(const Point& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void expand(const Box& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  bool contains(const Point& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
  bool intersects(const Box& b) const {
    return !(b.lo.x() > hi.x() || b.hi.x() < lo.x() || b.lo.y() > hi.y() || b.hi.y() < lo.y());
  }
  Point center() const { return 0.5 * (lo + hi); }
  double diag() const { return (hi - lo).norm(); }
  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  bool valid() const { return lo.x() <= hi.x() && lo.y() <= hi.y(); }
};

inline Box bbox_of(const PointList& pts) {
  Box b;
  for (const auto& p : pts) b.expand(p);
  return b;
}

// Point-equality tolerance is relative to the bounding-box diagonal of the inputs in
// play; every operation that needs one computes it from its own inputs.
struct Tolerances {
  double pt_rel = 1e-12;            // point identification, fraction of bbox diagonal
  double defining_residual = 1e-9;  // extension defining-equation audit
  double inverse_residual = 1e-8;   // F^-1(F(x)) audit
  double invert_roundtrip = 1e-10;  // PL inversion roundtrip

  double pt(const Box& scope) const { return pt_rel * std::max(scope.diag(), 1e-30); }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidGeometry : Error {
  using Error::Error;
};
struct SelfIntersection : InvalidGeometry {
  int seg_a = -1, seg_b = -1;
  SelfIntersection(const std::string& msg, int a, int b) : InvalidGeometry(msg), seg_a(a), seg_b(b) {}
};
struct DegenerateArea : InvalidGeometry {
  using InvalidGeometry::InvalidGeometry;
};
struct NonGenericContact : Error {
  using Error::Error;
};
struct InvalidInput : Error {
  using Error::Error;
};
struct NonPositiveEpsilon : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct FlippedTriangle : Error {
  int triangle = -1;
  FlippedTriangle(const std::string& msg, int t) : Error(msg), triangle(t) {}
};
struct TargetBoundaryNotSimple : Error {
  using Error::Error;
};
struct OutsideDomain : Error {
  using Error::Error;
};
struct OutsideImage : Error {
  using Error::Error;
};
struct GenerationFailed : Error {
  using Error::Error;
};
struct MeshRefinementExceeded : Error {
  using Error::Error;
};
struct NotConnectedIntersection : Error {
  using Error::Error;
};
struct ContainmentViolation : Error {
  using Error::Error;
};
struct InsideIntersection : Error {
  using Error::Error;
};
struct OutsideTruncation : Error {
  using Error::Error;
};
struct PartitionFailure : Error {
  using Error::Error;
};
struct DegenerateGamma : Error {
  using Error::Error;
};
struct MarginTooSmall : Error {
  double margin = 0.0;
  MarginTooSmall(const std::string& msg, double m) : Error(msg), margin(m) {}
};
struct PreconditionViolation : Error {
  using Error::Error;
};
struct SchemaError : Error {
  std::string pointer;
  SchemaError(const std::string& msg, std::string ptr) : Error(msg), pointer(std::move(ptr)) {}
};
struct VersionError : Error {
  using Error::Error;
};

// Location of a point relative to a closed region.
enum class Location { Inside, Boundary, Outside };

inline const char* to_string(Location l) {
  switch (l) {
    case Location::Inside: return "inside";
    case Location::Boundary: return "boundary";
    default: return "outside";
  }
}

}  // namespace planehomeo
