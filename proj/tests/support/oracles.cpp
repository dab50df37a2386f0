#include "support/oracles.hpp"

#include "planehomeo/epsilon.hpp"
#include "planehomeo/intersection.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

namespace testsupport {

using planehomeo::Box;

int rational_orient(const Point& a, const Point& b, const Point& c) {
  using Rat = boost::multiprecision::cpp_rational;
  const Rat ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  const Rat det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return det.sign();
}

namespace {

std::vector<double> scan_crossings(const PointList& loop, double y) {
  std::vector<double> xs;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    if ((a.y() <= y) != (b.y() <= y))
      xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<std::pair<double, double>> crossings_to_intervals(const std::vector<double>& xs) {
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) iv.emplace_back(xs[i], xs[i + 1]);
  return iv;
}

std::vector<std::pair<double, double>> intersect_intervals(
    const std::vector<std::pair<double, double>>& a, const std::vector<std::pair<double, double>>& b) {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second)
      ++i;
    else
      ++j;
  }
  return out;
}

// Sampling frame shared by the raster oracle and the generator guards, so
// both always agree on cell centers.
struct Frame {
  Point lo;
  double cw, ch;
  int grid;
};

Frame make_frame(const PointList& dLoop, const PointList& eLoop, int grid) {
  Box bb = planehomeo::bbox_of(dLoop);
  bb.expand(planehomeo::bbox_of(eLoop));
  const Point pad = 0.02 * (bb.hi - bb.lo) + Point(1e-12, 1e-12);
  const Point lo = bb.lo - pad;
  const Point hi = bb.hi + pad;
  return {lo, (hi.x() - lo.x()) / grid, (hi.y() - lo.y()) / grid, grid};
}

// Number of raster blobs (gap-2 connectivity, as in raster_intersection) a
// single loop produces on the frame. Anything but 1 means the loop is too
// thin somewhere for the raster to see it whole.
int blob_count(const PointList& loop, const Frame& f) {
  const Box lb = planehomeo::bbox_of(loop);
  const int c0 = std::clamp(static_cast<int>((lb.lo.x() - f.lo.x()) / f.cw) - 1, 0, f.grid - 1);
  const int c1 = std::clamp(static_cast<int>((lb.hi.x() - f.lo.x()) / f.cw) + 1, 0, f.grid - 1);
  const int r0 = std::clamp(static_cast<int>((lb.lo.y() - f.lo.y()) / f.ch) - 1, 0, f.grid - 1);
  const int r1 = std::clamp(static_cast<int>((lb.hi.y() - f.lo.y()) / f.ch) + 1, 0, f.grid - 1);
  const int W = c1 - c0 + 1, H = r1 - r0 + 1;
  std::vector<char> mask(static_cast<std::size_t>(W) * H, 0);
  for (int r = 0; r < H; ++r) {
    const double y = f.lo.y() + (r0 + r + 0.5) * f.ch;
    const auto xs = scan_crossings(loop, y);
    std::size_t i = 0;
    for (int c = 0; c < W; ++c) {
      const double x = f.lo.x() + (c0 + c + 0.5) * f.cw;
      while (i < xs.size() && xs[i] < x) ++i;
      if (i & 1) mask[static_cast<std::size_t>(r) * W + c] = 1;
    }
  }
  int blobs = 0;
  std::vector<char> seen(mask.size(), 0);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * W + c;
      if (!mask[idx] || seen[idx]) continue;
      ++blobs;
      std::deque<std::pair<int, int>> queue{{r, c}};
      seen[idx] = 1;
      while (!queue.empty()) {
        const auto [qr, qc] = queue.front();
        queue.pop_front();
        for (int dr = -2; dr <= 2; ++dr)
          for (int dc = -2; dc <= 2; ++dc) {
            const int nr = qr + dr, nc = qc + dc;
            if (nr < 0 || nr >= H || nc < 0 || nc >= W) continue;
            const std::size_t nidx = static_cast<std::size_t>(nr) * W + nc;
            if (mask[nidx] && !seen[nidx]) {
              seen[nidx] = 1;
              queue.emplace_back(nr, nc);
            }
          }
      }
    }
  return blobs;
}

}  // namespace

RasterComponents raster_intersection(const PointList& dLoop, const PointList& eLoop, int grid) {
  const Frame f = make_frame(dLoop, eLoop, grid);
  const Point lo = f.lo;
  const double cw = f.cw;
  const double ch = f.ch;

  RasterComponents rc;
  rc.cell_area = cw * ch;
  rc.cell_max = std::max(cw, ch);

  std::vector<char> mask(static_cast<std::size_t>(grid) * grid, 0);
  for (int r = 0; r < grid; ++r) {
    const double y = lo.y() + (r + 0.5) * ch;
    const auto xsD = scan_crossings(dLoop, y);
    const auto xsE = scan_crossings(eLoop, y);
    std::size_t iD = 0, iE = 0;
    for (int c = 0; c < grid; ++c) {
      const double x = lo.x() + (c + 0.5) * cw;
      while (iD < xsD.size() && xsD[iD] < x) ++iD;
      while (iE < xsE.size() && xsE[iE] < x) ++iE;
      if ((iD & 1) && (iE & 1)) mask[static_cast<std::size_t>(r) * grid + c] = 1;
    }
  }

  // Component labels, merging across gaps of up to two cells.
  std::vector<int> label(mask.size(), -1);
  for (int r = 0; r < grid; ++r)
    for (int c = 0; c < grid; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * grid + c;
      if (!mask[idx] || label[idx] >= 0) continue;
      const int id = rc.count++;
      std::deque<std::pair<int, int>> queue{{r, c}};
      label[idx] = id;
      while (!queue.empty()) {
        const auto [qr, qc] = queue.front();
        queue.pop_front();
        for (int dr = -2; dr <= 2; ++dr)
          for (int dc = -2; dc <= 2; ++dc) {
            const int nr = qr + dr, nc = qc + dc;
            if (nr < 0 || nr >= grid || nc < 0 || nc >= grid) continue;
            const std::size_t nidx = static_cast<std::size_t>(nr) * grid + nc;
            if (mask[nidx] && label[nidx] < 0) {
              label[nidx] = id;
              queue.emplace_back(nr, nc);
            }
          }
      }
    }

  // Distance-to-raster-boundary transform (4-neighbor BFS) for deep points.
  std::vector<int> dist(mask.size(), -1);
  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < grid; ++r)
    for (int c = 0; c < grid; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * grid + c;
      if (!mask[idx]) continue;
      bool edge = false;
      const int nbr[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : nbr) {
        const int nr = r + d[0], nc = c + d[1];
        if (nr < 0 || nr >= grid || nc < 0 || nc >= grid ||
            !mask[static_cast<std::size_t>(nr) * grid + nc]) {
          edge = true;
          break;
        }
      }
      if (edge) {
        dist[idx] = 0;
        queue.emplace_back(r, c);
      }
    }
  while (!queue.empty()) {
    const auto [qr, qc] = queue.front();
    queue.pop_front();
    const std::size_t idx = static_cast<std::size_t>(qr) * grid + qc;
    const int nbr[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : nbr) {
      const int nr = qr + d[0], nc = qc + d[1];
      if (nr < 0 || nr >= grid || nc < 0 || nc >= grid) continue;
      const std::size_t nidx = static_cast<std::size_t>(nr) * grid + nc;
      if (mask[nidx] && dist[nidx] < 0) {
        dist[nidx] = dist[idx] + 1;
        queue.emplace_back(nr, nc);
      }
    }
  }
  std::vector<std::tuple<int, int, int>> best(rc.count, {-1, 0, 0});  // (dist, r, c)
  for (int r = 0; r < grid; ++r)
    for (int c = 0; c < grid; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * grid + c;
      if (!mask[idx]) continue;
      auto cand = std::make_tuple(dist[idx], -r, -c);
      if (cand > best[label[idx]]) best[label[idx]] = cand;
    }
  for (const auto& [d, nr, nc] : best)
    rc.deep_points.emplace_back(lo.x() + (-nc + 0.5) * cw, lo.y() + (-nr + 0.5) * ch);

  // Per-component area from 16 scanline sub-rows per cell row.
  rc.areas.assign(rc.count, 0.0);
  const double subh = ch / 16.0;
  for (int r = 0; r < grid; ++r)
    for (int s = 0; s < 16; ++s) {
      const double y = lo.y() + r * ch + (s + 0.5) * subh;
      const auto common = intersect_intervals(crossings_to_intervals(scan_crossings(dLoop, y)),
                                              crossings_to_intervals(scan_crossings(eLoop, y)));
      for (const auto& [x0, x1] : common) {
        const double mid = 0.5 * (x0 + x1);
        const int c = std::clamp(static_cast<int>((mid - lo.x()) / cw), 0, grid - 1);
        int id = -1;
        const int probe[5][2] = {{0, 0}, {0, -1}, {0, 1}, {-1, 0}, {1, 0}};
        for (const auto& p : probe) {
          const int pr = r + p[0], pc = c + p[1];
          if (pr < 0 || pr >= grid || pc < 0 || pc >= grid) continue;
          const int l = label[static_cast<std::size_t>(pr) * grid + pc];
          if (l >= 0) {
            id = l;
            break;
          }
        }
        if (id >= 0) rc.areas[id] += (x1 - x0) * subh;
      }
    }
  return rc;
}

PointList star_polygon(std::mt19937_64& rng, const Point& center, double rmin, double rmax,
                       int nmin, int nmax) {
  const int n = uniform_int(rng, nmin, nmax);
  const double rot = uniform_in(rng, 0.0, 2.0 * M_PI);
  PointList pts;
  for (int i = 0; i < n; ++i) {
    const double ang = rot + 2.0 * M_PI * (i + 0.35 * (2.0 * uniform01(rng) - 1.0)) / n;
    const double r = uniform_in(rng, rmin, rmax);
    pts.emplace_back(center.x() + r * std::cos(ang), center.y() + r * std::sin(ang));
  }
  return pts;
}

namespace {

double inradius_estimate(const PointList& loop) {
  const Box bb = planehomeo::bbox_of(loop);
  double best = 0.0;
  const int g = 64;
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c) {
      const Point p(bb.lo.x() + (c + 0.5) / g * (bb.hi.x() - bb.lo.x()),
                    bb.lo.y() + (r + 0.5) / g * (bb.hi.y() - bb.lo.y()));
      if (planehomeo::point_in_loop(p, loop))
        best = std::max(best, planehomeo::boundary_distance(p, loop));
    }
  return best;
}

}  // namespace

std::pair<PointList, PointList> random_star_pair(std::mt19937_64& rng, int grid) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    const double scale = 0.35;
    const Point c1(uniform_in(rng, 0.35, 0.65), uniform_in(rng, 0.35, 0.65));
    const double phi = uniform_in(rng, 0.0, 2.0 * M_PI);
    const double d = uniform_in(rng, 0.15, 0.55);
    const Point c2 = c1 + d * Point(std::cos(phi), std::sin(phi));
    const PointList dP = star_polygon(rng, c1, 0.45 * scale, scale, 8, 32);
    const PointList eP = star_polygon(rng, c2, 0.45 * scale, scale, 8, 32);

    try {
      const auto D = planehomeo::validate_jordan(dP);
      const auto E = planehomeo::validate_jordan(eP);
      const auto dec = planehomeo::decompose(D, E);
      if (!dec.warnings.empty() || dec.components.empty()) continue;

      const Frame f = make_frame(dP, eP, grid);
      const double cellMax = std::max(f.cw, f.ch);

      bool ok = true;
      for (const auto& comp : dec.components)
        if (inradius_estimate(comp.region.boundary) < 3.0 * cellMax ||
            blob_count(comp.region.boundary, f) != 1) {
          ok = false;
          break;
        }
      for (std::size_t i = 0; ok && i < dec.components.size(); ++i)
        for (std::size_t j = i + 1; ok && j < dec.components.size(); ++j)
          if (planehomeo::set_distance(dec.components[i].region.boundary,
                                       dec.components[j].region.boundary) < 6.0 * cellMax)
            ok = false;
      if (!ok) continue;
      return {D.boundary, E.boundary};
    } catch (const planehomeo::Error&) {
      continue;
    }
  }
  throw planehomeo::GenerationFailed("no generic star pair found within the attempt budget");
}

int crossing_degree(const PointList& loop) {
  const Point origin = Point::Zero();
  int degree = 0;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    if (a.y() <= 0.0) {
      if (b.y() > 0.0 && rational_orient(a, b, origin) > 0) ++degree;
    } else {
      if (b.y() <= 0.0 && rational_orient(a, b, origin) < 0) --degree;
    }
  }
  return degree;
}

}  // namespace testsupport
