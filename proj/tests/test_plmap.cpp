#include <doctest.h>

#include "planehomeo/pl_map.hpp"
#include "planehomeo/rng.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace planehomeo;

namespace {

PointList square(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

PointList ngon(const Point& c, double r, int n, double phase = 0.0) {
  PointList p;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * M_PI * i / n;
    p.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
  return p;
}

PointList translated(const PointList& pts, const Point& t) {
  PointList out = pts;
  for (auto& p : out) p += t;
  return out;
}

// Interior point sampler by parity rejection inside the bbox.
Point sample_inside(Rng& rng, const JordanDomain& dom) {
  const Box b = dom.bbox();
  for (;;) {
    const Point p(rng.uniform(b.lo.x(), b.hi.x()), rng.uniform(b.lo.y(), b.hi.y()));
    if (point_in_loop(p, dom.boundary)) return p;
  }
}

}  // namespace

TEST_CASE("identity and translation maps evaluate exactly") {
  const JordanDomain D = validate_jordan(square(0, 0, 4, 4));
  const Triangulation T = mesh_domain(D, 0.6);

  const PLHomeo id(T, T.vertices);
  CHECK(is_orientation_preserving(id));
  const Point t(2, 0);
  const PLHomeo tr(T, translated(T.vertices, t));

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point x = sample_inside(rng, D);
    CHECK((id.evaluate(x) - x).norm() <= 1e-14);
    CHECK((tr.evaluate(x) - (x + t)).norm() <= 1e-13);
    CHECK((tr.invert(x + t) - x).norm() <= 1e-13);
    CHECK((id.invert(x) - x).norm() <= 1e-14);
  }
  CHECK_THROWS_AS(tr.evaluate(Point(4.7, 1)), OutsideDomain);
  CHECK_THROWS_AS(tr.invert(Point(0.5, 1)), OutsideImage);

  const JordanDomain img = validate_jordan(tr.image_boundary());
  CHECK(img.area() == doctest::Approx(D.area()));
  CHECK(point_in_loop(Point(4.5, 2), img.boundary));
  CHECK(!point_in_loop(Point(0.5, 2), img.boundary));
}

TEST_CASE("build rejects folds and non-simple image boundaries") {
  const JordanDomain D = validate_jordan(square(0, 0, 4, 4));
  const Triangulation T = mesh_domain(D, 0.6);
  const std::set<int> bnd(T.boundary_loop.begin(), T.boundary_loop.end());

  // Swapping the endpoints of an interior edge reverses the orientation of
  // every triangle containing that edge.
  int u = -1, v = -1;
  std::set<std::pair<int, int>> directed;
  for (const auto& t : T.triangles)
    for (int k = 0; k < 3; ++k) directed.insert({t[k], t[(k + 1) % 3]});
  for (const auto& e : directed) {
    if (bnd.count(e.first) || bnd.count(e.second)) continue;
    if (directed.count({e.second, e.first})) {
      u = e.first;
      v = e.second;
      break;
    }
  }
  REQUIRE(u >= 0);
  PointList swapped = T.vertices;
  std::swap(swapped[u], swapped[v]);
  bool witness = false;
  for (const auto& t : T.triangles)
    if (orient(swapped[t[0]], swapped[t[1]], swapped[t[2]]) < 0) witness = true;
  REQUIRE(witness);
  CHECK_THROWS_AS(build_pl_homeo(T, swapped), FlippedTriangle);
  CHECK(!is_orientation_preserving(T, swapped));

  CHECK_THROWS_AS(build_pl_homeo(T, PointList(T.vertices.begin(), T.vertices.end() - 1)),
                  InvalidInput);

  // A reflection preserves triangle shapes but reverses every orientation.
  PointList reflected = T.vertices;
  for (auto& p : reflected) p.x() = -p.x();
  CHECK(!is_orientation_preserving(T, reflected));
}

TEST_CASE("evaluation is consistent across shared interior edges") {
  const JordanDomain D = validate_jordan(square(0, 0, 3, 3));
  const Triangulation T = mesh_domain(D, 0.5);
  const PLHomeo f = random_op_homeo(11, D, 0.04);
  const Triangulation& S = f.source();
  const PointList& tgt = f.target_positions();

  std::map<std::pair<int, int>, int> owner;
  for (std::size_t ti = 0; ti < S.triangles.size(); ++ti)
    for (int k = 0; k < 3; ++k)
      owner[{S.triangles[ti][k], S.triangles[ti][(k + 1) % 3]}] = static_cast<int>(ti);

  int tested = 0;
  for (const auto& [e, ta] : owner) {
    const auto rev = owner.find({e.second, e.first});
    if (rev == owner.end()) continue;
    const int tb = rev->second;
    for (double s : {0.25, 0.5, 0.75}) {
      const Point p = (1.0 - s) * S.vertices[e.first] + s * S.vertices[e.second];
      const auto apply = [&](int ti) {
        const auto& t = S.triangles[ti];
        const auto w = barycentric(S.vertices[t[0]], S.vertices[t[1]], S.vertices[t[2]], p);
        return Point(w[0] * tgt[t[0]] + w[1] * tgt[t[1]] + w[2] * tgt[t[2]]);
      };
      CHECK((apply(ta) - apply(tb)).norm() <= 1e-14);
    }
    if (++tested == 40) break;
  }
  CHECK(tested == 40);
}

TEST_CASE("round trip and injectivity on a random map") {
  const JordanDomain D = validate_jordan(square(0, 0, 1, 1));
  const PLHomeo f = random_op_homeo(42, D, 0.05);
  CHECK(is_orientation_preserving(f));

  Rng rng(99);
  const double taup = default_tolerances().pt(D.bbox());
  for (int i = 0; i < 1000; ++i) {
    const Point x = sample_inside(rng, D);
    const Point y = f.evaluate(x);
    CHECK((f.invert(y) - x).norm() <= 1e-10);
    const Point x2 = sample_inside(rng, D);
    if ((x - x2).norm() <= 100 * taup) continue;
    CHECK((f.evaluate(x2) - y).norm() > taup);
  }
  // Inverse direction round trip on image samples.
  for (int i = 0; i < 1000; ++i) {
    const Point x = sample_inside(rng, D);
    const Point y = f.evaluate(x);
    CHECK((f.evaluate(f.invert(y)) - y).norm() <= 1e-10);
  }
}

TEST_CASE("random generator is deterministic and validator-clean") {
  const JordanDomain D = validate_jordan(square(0, 0, 1, 1));

  const PLHomeo a = random_op_homeo(42, D, 0.05);
  const PLHomeo b = random_op_homeo(42, D, 0.05);
  REQUIRE(a.target_positions().size() == b.target_positions().size());
  for (std::size_t i = 0; i < a.target_positions().size(); ++i)
    CHECK(a.target_positions()[i] == b.target_positions()[i]);

  const PLHomeo zero = random_op_homeo(7, D, 0.0);
  for (std::size_t i = 0; i < zero.target_positions().size(); ++i)
    CHECK((zero.target_positions()[i] - zero.source().vertices[i]).norm() == 0.0);

  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    try {
      random_op_homeo(seed, D, 0.05);
      ++pass;
    } catch (const Error&) {
    }
  }
  CHECK(pass == 1000);
}

TEST_CASE("composition and powers") {
  const JordanDomain D = validate_jordan(square(0, 0, 6, 6));
  const Triangulation T = mesh_domain(D, 0.9);
  const Point t(0.5, 0.25);
  const PLHomeo tr(T, translated(T.vertices, t));
  const PLHomeo id(T, T.vertices);

  const MapHandle tr3 = power(tr, 3);
  const MapHandle idc = compose(tr, id);
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const Point x(rng.uniform(0.1, 4.3), rng.uniform(0.1, 4.3));
    const auto y = tr3(x);
    REQUIRE(y.has_value());
    CHECK((*y - (x + 3.0 * t)).norm() <= 1e-12);
    const auto z = idc(x);
    REQUIRE(z.has_value());
    CHECK((*z - tr.evaluate(x)).norm() <= 1e-14);
  }
  // Identity power.
  const MapHandle p0 = power(tr, 0);
  CHECK((*p0(Point(1, 1)) - Point(1, 1)).norm() == 0.0);

  // A rotation is linear, so its piecewise-linear interpolant is the rotation
  // itself and the third power of a one-third turn returns every point.
  const JordanDomain disk = validate_jordan(ngon({0, 0}, 1.0, 24));
  const Triangulation TD = mesh_domain(disk, 0.3);
  const double c = std::cos(2.0 * M_PI / 3.0), s = std::sin(2.0 * M_PI / 3.0);
  PointList rot = TD.vertices;
  for (auto& p : rot) p = Point(c * p.x() - s * p.y(), s * p.x() + c * p.y());
  const PLHomeo third(TD, rot);
  const MapHandle full = power(third, 3);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0, 2.0 * M_PI), r = 0.9 * std::sqrt(rng.uniform01());
    const Point x(r * std::cos(a), r * std::sin(a));
    const auto y = full(x);
    REQUIRE(y.has_value());
    CHECK((*y - x).norm() <= 1e-10);
  }
}

TEST_CASE("orbits stop at domain exit and record component escape") {
  const JordanDomain D = validate_jordan(square(0, 0, 4, 4));
  const JordanDomain E = validate_jordan(square(1, 0, 5, 4));
  const Triangulation T = mesh_domain(D, 0.6);
  const PLHomeo tr(T, translated(T.vertices, Point(1, 0)));

  const auto comps = intersect_domains(D, E);
  REQUIRE(comps.size() == 1);

  // Fixed point of the identity: constant orbit, no escape.
  const PLHomeo id(T, T.vertices);
  const OrbitRecord still = iterate(id.as_map(), Point(2, 2), 5);
  CHECK(still.points.size() == 6);
  CHECK(!still.escape_index.has_value());
  for (const auto& p : still.points) CHECK((p - Point(2, 2)).norm() <= 1e-14);

  // Untracked orbit of the translation runs until it leaves D.
  const OrbitRecord run = iterate(tr.as_map(), Point(0.5, 2.0), 50);
  CHECK(!run.escape_index.has_value());
  CHECK(run.points.size() == 5);  // x = 0.5 .. 4.5, then f is undefined
  CHECK((run.points.back() - Point(4.5, 2.0)).norm() <= 1e-12);

  // Tracked against the intersection square [1,4]x[0,4].
  const OrbitRecord esc = iterate(tr.as_map(), Point(1.5, 2.0), 50, &comps, 0);
  REQUIRE(esc.escape_index.has_value());
  CHECK(*esc.escape_index == 3);
  CHECK(esc.component_ids.size() == 4);
  CHECK(esc.component_ids.back() == -1);

  // Boundary membership counts as inside: an orbit landing exactly on the
  // component edge escapes one step later.
  const OrbitRecord edge = iterate(tr.as_map(), Point(1.0, 2.0), 50, &comps, 0);
  REQUIRE(edge.escape_index.has_value());
  CHECK(*edge.escape_index == 4);

  CHECK_THROWS_AS(iterate(tr.as_map(), Point(1, 1), 10, &comps, 3), InvalidInput);
}
