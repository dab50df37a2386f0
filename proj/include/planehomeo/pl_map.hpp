#pragma once

#include "planehomeo/intersection.hpp"
#include "planehomeo/triangulation.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

namespace planehomeo {

// Partial map of the plane: nullopt where undefined. Composition-friendly form
// shared by piecewise-linear maps and plane extensions.
using MapHandle = std::function<std::optional<Point>(const Point&)>;

// Piecewise-linear homeomorphism determined by a source mesh and one target
// position per source vertex. Construction certifies the map: every image
// triangle strictly counterclockwise and the image boundary simple. Values are
// immutable after construction; copies share; evaluation is reentrant.
class PLHomeo {
 public:
  // Throws InvalidInput on size mismatch or an annular source,
  // FlippedTriangle on a non-CCW image triangle, TargetBoundaryNotSimple.
  PLHomeo(Triangulation source, PointList target_positions);

  const Triangulation& source() const;
  const PointList& target_positions() const;
  // Image positions along the source boundary loop (a simple CCW polygon).
  PointList image_boundary() const;

  Point evaluate(const Point& x) const;  // throws OutsideDomain
  Point invert(const Point& y) const;    // throws OutsideImage

  // Handle forms return nullopt instead of throwing and accept points within
  // the point tolerance of the domain, so orbits may graze the boundary.
  MapHandle as_map() const;
  MapHandle as_inverse_map() const;

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

PLHomeo build_pl_homeo(Triangulation source, PointList target_positions);

// Orientation certificate: every image triangle positively oriented. Usable on
// raw data that build_pl_homeo would reject.
bool is_orientation_preserving(const Triangulation& source, const PointList& target_positions);
bool is_orientation_preserving(const PLHomeo& f);

MapHandle as_map(const PLHomeo& f);
MapHandle compose(MapHandle g, MapHandle f);  // g after f
MapHandle compose(const PLHomeo& g, const PLHomeo& f);
MapHandle power(MapHandle f, int k);  // k >= 0; power(f, 0) is the identity
MapHandle power(const PLHomeo& f, int k);

struct OrbitRecord {
  PointList points;                 // points[k] = f^k(x) while defined
  std::optional<int> escape_index;  // least n with points[n] outside the tracked component
  std::vector<int> component_ids;   // containing component per step, -1 when none
};

// Orbit of x under f for at most max_iter steps. Stops early when f is
// undefined at the current point (domain exit) or, when track >= 0, as soon as
// the orbit leaves components[track]; boundary membership counts as inside.
OrbitRecord iterate(const MapHandle& f, const Point& x, int max_iter,
                    const std::vector<IntersectionComponent>* components = nullptr,
                    int track = -1);

// Random orientation-preserving self-homeomorphism of D: meshes the domain,
// fixes the boundary, and displaces each interior vertex uniformly within
// displacement_scale times the bbox diagonal, redrawing while any incident
// triangle would flip. Deterministic in seed; throws GenerationFailed when a
// vertex exhausts its redraw budget.
PLHomeo random_op_homeo(std::uint64_t seed, const JordanDomain& D, double displacement_scale);

}  // namespace planehomeo
