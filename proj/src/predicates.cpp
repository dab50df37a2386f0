#include "planehomeo/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace planehomeo {

namespace {

// Error-free transformations over IEEE doubles (round-to-nearest assumed).
inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bv = x - a;
  double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  double bv = a - x;
  double av = x + bv;
  y = (a - av) - (b - bv);
}

inline void split_double(double a, double& hi, double& lo) {
  double c = 134217729.0 * a;  // 2^27 + 1
  double big = c - a;
  hi = c - big;
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split_double(a, ahi, alo);
  split_double(b, bhi, blo);
  double e1 = x - ahi * bhi;
  double e2 = e1 - alo * bhi;
  double e3 = e2 - ahi * blo;
  y = alo * blo - e3;
}

// h = e + f for expansions sorted by increasing magnitude; zero components dropped.
// Returns the length of h.
int expansion_sum(int elen, const double* e, int flen, const double* f, double* h) {
  double g[16];
  int n = 0, i = 0, j = 0;
  while (i < elen && j < flen)
    g[n++] = std::fabs(e[i]) <= std::fabs(f[j]) ? e[i++] : f[j++];
  while (i < elen) g[n++] = e[i++];
  while (j < flen) g[n++] = f[j++];

  double q = g[0];
  int hn = 0;
  for (int k = 1; k < n; ++k) {
    double qn, hh;
    two_sum(q, g[k], qn, hh);
    q = qn;
    if (hh != 0.0) h[hn++] = hh;
  }
  if (q != 0.0 || hn == 0) h[hn++] = q;
  return hn;
}

// Exact 4-component expansion of a*b - c*d.
inline void cross_expansion(double a, double b, double c, double d, double* x) {
  double p1, p0, q1, q0;
  two_product(a, b, p1, p0);
  two_product(c, d, q1, q0);
  // (p1, p0) - (q1, q0)
  double i, x0, j, x1, x2, x3, t;
  two_diff(p0, q0, i, x0);
  two_sum(p1, i, j, t);
  double k, x1b;
  two_diff(t, q1, k, x1b);
  two_sum(j, k, x3, x2);
  x1 = x1b;
  x[0] = x0;
  x[1] = x1;
  x[2] = x2;
  x[3] = x3;
}

int exact_orient_sign(const Point& a, const Point& b, const Point& c) {
  double ab[4], bc[4], ca[4];
  cross_expansion(a.x(), b.y(), a.y(), b.x(), ab);
  cross_expansion(b.x(), c.y(), b.y(), c.x(), bc);
  cross_expansion(c.x(), a.y(), c.y(), a.x(), ca);
  double tmp[8], out[12];
  int tl = expansion_sum(4, ab, 4, bc, tmp);
  int ol = expansion_sum(tl, tmp, 4, ca, out);
  double w = out[ol - 1];
  return (w > 0.0) - (w < 0.0);
}

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEps) * kEps;

// The expansion arithmetic above is exact only while no intermediate product
// under- or overflows. Products of coordinates inside [2^-400, 2^400] keep every
// two_product error term normal, with ample slack for the splitter.
bool expansion_safe(std::initializer_list<double> vs) {
  constexpr double lo = 3.872591914849318e-121;  // 2^-400
  constexpr double hi = 2.582249878086908e+120;  // 2^400
  for (double v : vs) {
    const double m = std::fabs(v);
    if (m != 0.0 && (m < lo || m > hi)) return false;
  }
  return true;
}

int rational_orient_sign(const Point& a, const Point& b, const Point& c) {
  using Rat = boost::multiprecision::cpp_rational;
  const Rat det = (Rat(a.x()) - Rat(c.x())) * (Rat(b.y()) - Rat(c.y())) -
                  (Rat(a.y()) - Rat(c.y())) * (Rat(b.x()) - Rat(c.x()));
  return det.sign();
}

}  // namespace

int orient(const Point& a, const Point& b, const Point& c) {
  if (!(std::isfinite(a.x()) && std::isfinite(a.y()) && std::isfinite(b.x()) &&
        std::isfinite(b.y()) && std::isfinite(c.x()) && std::isfinite(c.y())))
    throw InvalidGeometry("orient requires finite coordinates");
  double detleft = (a.x() - c.x()) * (b.y() - c.y());
  double detright = (a.y() - c.y()) * (b.x() - c.x());
  double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return (det > 0.0) - (det < 0.0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return (det > 0.0) - (det < 0.0);
    detsum = -detleft - detright;
  } else {
    return (det > 0.0) - (det < 0.0);
  }
  double errbound = kCcwErrBoundA * detsum;
  if (det >= errbound || -det >= errbound) return (det > 0.0) - (det < 0.0);
  if (expansion_safe({a.x(), a.y(), b.x(), b.y(), c.x(), c.y()}))
    return exact_orient_sign(a, b, c);
  return rational_orient_sign(a, b, c);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  if (orient(a, b, p) != 0) return false;
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) &&
         p.y() >= std::min(a.y(), b.y()) && p.y() <= std::max(a.y(), b.y());
}

double segment_distance_sq(const Point& a, const Point& b, const Point& p) {
  Point d = b - a;
  double len2 = d.squaredNorm();
  if (len2 <= 0.0) return (p - a).squaredNorm();
  double t = (p - a).dot(d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).squaredNorm();
}

bool segments_touch(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  int o1 = orient(a0, a1, b0);
  int o2 = orient(a0, a1, b1);
  int o3 = orient(b0, b1, a0);
  int o4 = orient(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a0, a1, b0)) return true;
  if (o2 == 0 && on_segment(a0, a1, b1)) return true;
  if (o3 == 0 && on_segment(b0, b1, a0)) return true;
  if (o4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double segment_segment_distance(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  if (segments_touch(a0, a1, b0, b1)) return 0.0;
  double d = segment_distance_sq(a0, a1, b0);
  d = std::min(d, segment_distance_sq(a0, a1, b1));
  d = std::min(d, segment_distance_sq(b0, b1, a0));
  d = std::min(d, segment_distance_sq(b0, b1, a1));
  return std::sqrt(d);
}

}  // namespace planehomeo
