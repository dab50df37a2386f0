#include "planehomeo/pl_map.hpp"

#include "planehomeo/predicates.hpp"
#include "planehomeo/rng.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace planehomeo {

struct PLHomeo::Data {
  Triangulation src;
  PointList tgt;
  double snapSrc, snapTgt;
  TriangleLocator srcLoc, tgtLoc;

  Data(Triangulation s, PointList t)
      : src(std::move(s)),
        tgt(std::move(t)),
        snapSrc(default_tolerances().pt(bbox_of(src.vertices))),
        snapTgt(default_tolerances().pt(bbox_of(tgt))),
        srcLoc(src.vertices, src.triangles),
        tgtLoc(tgt, src.triangles) {}

  Point forward(int ti, const std::array<double, 3>& w) const {
    const auto& t = src.triangles[ti];
    return w[0] * tgt[t[0]] + w[1] * tgt[t[1]] + w[2] * tgt[t[2]];
  }
  Point backward(int ti, const std::array<double, 3>& w) const {
    const auto& t = src.triangles[ti];
    return w[0] * src.vertices[t[0]] + w[1] * src.vertices[t[1]] + w[2] * src.vertices[t[2]];
  }
};

PLHomeo::PLHomeo(Triangulation source, PointList target) {
  if (source.vertices.size() != target.size())
    throw InvalidInput("one target position per source vertex required");
  if (!source.inner_loop.empty())
    throw InvalidInput("map source must be a simply connected domain");
  validate_mesh(source);
  for (std::size_t i = 0; i < source.triangles.size(); ++i) {
    const auto& t = source.triangles[i];
    if (orient(target[t[0]], target[t[1]], target[t[2]]) <= 0)
      throw FlippedTriangle("image triangle " + std::to_string(i) + " is not counterclockwise",
                            static_cast<int>(i));
  }
  PointList ib;
  ib.reserve(source.boundary_loop.size());
  for (int v : source.boundary_loop) ib.push_back(target[v]);
  if (find_self_intersection(ib))
    throw TargetBoundaryNotSimple("image boundary intersects itself");
  d_ = std::make_shared<const Data>(std::move(source), std::move(target));
}

const Triangulation& PLHomeo::source() const { return d_->src; }
const PointList& PLHomeo::target_positions() const { return d_->tgt; }

PointList PLHomeo::image_boundary() const {
  PointList ib;
  ib.reserve(d_->src.boundary_loop.size());
  for (int v : d_->src.boundary_loop) ib.push_back(d_->tgt[v]);
  return ib;
}

Point PLHomeo::evaluate(const Point& x) const {
  const int ti = d_->srcLoc.find(x);
  if (ti < 0) throw OutsideDomain("evaluate outside the source domain");
  const auto& t = d_->src.triangles[ti];
  return d_->forward(
      ti, barycentric(d_->src.vertices[t[0]], d_->src.vertices[t[1]], d_->src.vertices[t[2]], x));
}

Point PLHomeo::invert(const Point& y) const {
  const int ti = d_->tgtLoc.find(y);
  if (ti < 0) throw OutsideImage("invert outside the image domain");
  const auto& t = d_->src.triangles[ti];
  return d_->backward(ti, barycentric(d_->tgt[t[0]], d_->tgt[t[1]], d_->tgt[t[2]], y));
}

MapHandle PLHomeo::as_map() const {
  const auto d = d_;
  return [d](const Point& x) -> std::optional<Point> {
    std::array<double, 3> w{};
    const int ti = d->srcLoc.find_near(x, d->snapSrc, &w);
    if (ti < 0) return std::nullopt;
    return d->forward(ti, w);
  };
}

MapHandle PLHomeo::as_inverse_map() const {
  const auto d = d_;
  return [d](const Point& y) -> std::optional<Point> {
    std::array<double, 3> w{};
    const int ti = d->tgtLoc.find_near(y, d->snapTgt, &w);
    if (ti < 0) return std::nullopt;
    return d->backward(ti, w);
  };
}

PLHomeo build_pl_homeo(Triangulation source, PointList target_positions) {
  return PLHomeo(std::move(source), std::move(target_positions));
}

bool is_orientation_preserving(const Triangulation& source, const PointList& target_positions) {
  if (source.vertices.size() != target_positions.size())
    throw InvalidInput("one target position per source vertex required");
  for (const auto& t : source.triangles)
    if (orient(target_positions[t[0]], target_positions[t[1]], target_positions[t[2]]) <= 0)
      return false;
  return true;
}

bool is_orientation_preserving(const PLHomeo& f) {
  return is_orientation_preserving(f.source(), f.target_positions());
}

MapHandle as_map(const PLHomeo& f) { return f.as_map(); }

MapHandle compose(MapHandle g, MapHandle f) {
  return [g = std::move(g), f = std::move(f)](const Point& x) -> std::optional<Point> {
    const auto y = f(x);
    return y ? g(*y) : std::nullopt;
  };
}

MapHandle compose(const PLHomeo& g, const PLHomeo& f) { return compose(g.as_map(), f.as_map()); }

MapHandle power(MapHandle f, int k) {
  if (k < 0) throw InvalidInput("power wants a nonnegative exponent");
  if (k == 0)
    return [](const Point& x) -> std::optional<Point> { return x; };
  MapHandle acc = f;
  for (int i = 1; i < k; ++i) acc = compose(f, acc);
  return acc;
}

MapHandle power(const PLHomeo& f, int k) { return power(f.as_map(), k); }

OrbitRecord iterate(const MapHandle& f, const Point& x, int max_iter,
                    const std::vector<IntersectionComponent>* components, int track) {
  if (max_iter < 0) throw InvalidInput("iterate wants a nonnegative step budget");
  if (track >= 0 &&
      (!components || track >= static_cast<int>(components->size())))
    throw InvalidInput("tracked component index out of range");
  const auto member = [components](const Point& p) -> int {
    if (!components) return -1;
    for (std::size_t i = 0; i < components->size(); ++i)
      if (locate(p, (*components)[i].region) != Location::Outside) return static_cast<int>(i);
    return -1;
  };
  OrbitRecord rec;
  Point cur = x;
  for (int n = 0;; ++n) {
    rec.points.push_back(cur);
    const int cid = member(cur);
    rec.component_ids.push_back(cid);
    if (track >= 0 && cid != track) {
      rec.escape_index = n;
      break;
    }
    if (n == max_iter) break;
    const auto nxt = f(cur);
    if (!nxt) break;
    cur = *nxt;
  }
  return rec;
}

PLHomeo random_op_homeo(std::uint64_t seed, const JordanDomain& D, double displacement_scale) {
  if (displacement_scale < 0.0) throw InvalidInput("displacement scale must be nonnegative");
  const double diag = D.bbox().diag();
  const Triangulation T = mesh_domain(D, 0.2 * diag);

  std::vector<std::vector<int>> star(T.vertices.size());
  for (std::size_t ti = 0; ti < T.triangles.size(); ++ti)
    for (int k = 0; k < 3; ++k) star[T.triangles[ti][k]].push_back(static_cast<int>(ti));
  const std::set<int> fixed(T.boundary_loop.begin(), T.boundary_loop.end());

  Rng rng(seed);
  PointList tgt = T.vertices;
  const double radius = displacement_scale * diag;
  for (int v = 0; v < static_cast<int>(T.vertices.size()); ++v) {
    if (fixed.count(v)) continue;
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      // Shrink the draw radius as rejections accumulate so tight vertex stars
      // still terminate with a small (possibly zero-ish) displacement.
      const double r = radius * std::pow(0.7, attempt / 4);
      const auto [dx, dy] = rng.in_unit_disk();
      tgt[v] = T.vertices[v] + r * Point(dx, dy);
      placed = true;
      for (int ti : star[v]) {
        const auto& t = T.triangles[ti];
        if (orient(tgt[t[0]], tgt[t[1]], tgt[t[2]]) <= 0) {
          placed = false;
          break;
        }
      }
      if (!placed) tgt[v] = T.vertices[v];
    }
    if (!placed)
      throw GenerationFailed("could not displace vertex " + std::to_string(v) +
                             " without flipping a triangle");
  }
  return build_pl_homeo(T, std::move(tgt));
}

}  // namespace planehomeo
