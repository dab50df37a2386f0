#include <doctest.h>

#include "planehomeo/jordan.hpp"
#include "planehomeo/triangulation.hpp"

#include <cmath>
#include <set>

using namespace planehomeo;

namespace {

PointList ring(const Point& c, double r, int n) {
  PointList p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    p.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
  return p;
}

double triangle_area_sum(const Triangulation& T) {
  double s = 0.0;
  for (const auto& t : T.triangles)
    s += 0.5 * cross2(T.vertices[t[1]] - T.vertices[t[0]], T.vertices[t[2]] - T.vertices[t[0]]);
  return s;
}

double max_edge(const Triangulation& T) {
  double m = 0.0;
  for (const auto& t : T.triangles)
    for (int k = 0; k < 3; ++k)
      m = std::max(m, (T.vertices[t[(k + 1) % 3]] - T.vertices[t[k]]).norm());
  return m;
}

}  // namespace

TEST_CASE("barycentric weights") {
  const Point a(0, 0), b(2, 0), c(0, 2);
  auto w = barycentric(a, b, c, a);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.0));
  w = barycentric(a, b, c, Point(0.5, 0.5));
  const Point back = w[0] * a + w[1] * b + w[2] * c;
  CHECK(back.x() == doctest::Approx(0.5));
  CHECK(back.y() == doctest::Approx(0.5));
  CHECK_THROWS_AS(barycentric(a, b, Point(4, 0), Point(1, 1)), InvalidGeometry);
}

TEST_CASE("mesh_domain tiles a square") {
  const JordanDomain dom = validate_jordan({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Triangulation T = mesh_domain(dom, 0.2);
  validate_mesh(T);
  CHECK(T.inner_loop.empty());
  CHECK(triangle_area_sum(T) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_edge(T) <= 0.4);
  for (int v : T.boundary_loop) {
    const Point& p = T.vertices[v];
    const bool onEdge = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    CHECK(onEdge);
  }
}

TEST_CASE("mesh_domain tiles a nonconvex polygon") {
  const JordanDomain dom =
      validate_jordan({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {3, 2}, {3, 3}, {0, 3}});
  const Triangulation T = mesh_domain(dom, 0.3);
  validate_mesh(T);
  CHECK(triangle_area_sum(T) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("mesh_domain keeps required interior points as exact vertices") {
  const JordanDomain dom = validate_jordan({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  const PointList req = {{0.371, 1.207}, {1.5, 0.5}, {1.0, 1.0}};
  const Triangulation T = mesh_domain(dom, 0.25, req);
  validate_mesh(T);
  for (const auto& r : req) {
    bool found = false;
    for (const auto& v : T.vertices)
      if (v == r) found = true;
    CHECK(found);
  }
}

TEST_CASE("mesh_annulus tiles the region between two loops") {
  const PointList inner = ring({0.1, -0.05}, 0.8, 17);
  const PointList outer = ring({0, 0}, 3.0, 48);
  const Triangulation T = mesh_annulus(inner, outer, 0.35);
  validate_mesh(T);
  CHECK(!T.inner_loop.empty());
  const double want = polygon_signed_area(outer) - polygon_signed_area(inner);
  CHECK(triangle_area_sum(T) == doctest::Approx(want).epsilon(1e-9));
  CHECK(max_edge(T) <= 0.7);

  // Stored loops trace the input circles (up to densification).
  for (int v : T.inner_loop)
    CHECK((T.vertices[v] - Point(0.1, -0.05)).norm() <= 0.8 + 1e-12);
  for (int v : T.boundary_loop)
    CHECK((T.vertices[v] - Point(0, 0)).norm() == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("mesh_annulus handles a nonconvex inner loop") {
  PointList inner;
  for (int i = 0; i < 14; ++i) {
    const double a = 2.0 * M_PI * i / 14;
    const double r = (i % 2 == 0) ? 1.0 : 0.45;
    inner.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  const Triangulation T = mesh_annulus(inner, ring({0, 0}, 4.0, 64), 0.5);
  validate_mesh(T);
  const double want = polygon_signed_area(ring({0, 0}, 4.0, 64)) - polygon_signed_area(inner);
  CHECK(triangle_area_sum(T) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("triangle locator finds containing triangles") {
  const JordanDomain dom = validate_jordan({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  const Triangulation T = mesh_domain(dom, 0.5);
  const TriangleLocator loc(T.vertices, T.triangles);

  for (std::size_t ti = 0; ti < T.triangles.size(); ti += 7) {
    const auto& t = T.triangles[ti];
    const Point cen =
        (T.vertices[t[0]] + T.vertices[t[1]] + T.vertices[t[2]]) / 3.0;
    const int got = loc.find(cen);
    REQUIRE(got >= 0);
    // The centroid is interior to exactly one triangle.
    CHECK(got == static_cast<int>(ti));
  }
  CHECK(loc.find(Point(5, 5)) == -1);
  CHECK(loc.find(Point(-0.001, 2)) == -1);
}

TEST_CASE("triangle locator picks the lowest index on shared edges") {
  const PointList verts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}};
  const TriangleLocator loc(verts, tris);
  // On the shared diagonal both triangles contain the point.
  CHECK(loc.find(Point(0.5, 0.5)) == 0);
  CHECK(loc.find(Point(0        , 0)) == 0);
  CHECK(loc.find(Point(0.25, 0.75)) == 1);
}

TEST_CASE("triangle locator snaps nearby outside points") {
  const PointList verts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}};
  const TriangleLocator loc(verts, tris);

  std::array<double, 3> w{};
  const int got = loc.find_near(Point(0.5, -0.004), 0.01, &w);
  REQUIRE(got == 0);
  CHECK(w[0] >= 0.0);
  CHECK(w[1] >= 0.0);
  CHECK(w[2] >= 0.0);
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(0.0));  // clamped off the outside edge

  CHECK(loc.find_near(Point(0.5, -0.2), 0.01, nullptr) == -1);
}
