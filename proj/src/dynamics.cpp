#include "planehomeo/dynamics.hpp"

#include "planehomeo/intersection.hpp"
#include "planehomeo/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

namespace planehomeo {
namespace {

constexpr double kMaxIncrement = std::numbers::pi / 4.0;
constexpr int kMarginFactor = 10;

struct WindingScan {
  enum class Status { Ok, Undefined, Degenerate, Budget };
  Status status = Status::Ok;
  int winding = 0;
  double margin = std::numeric_limits<double>::infinity();
  double maxStep = 0.0;
  bool localRule = false;

  bool trusted() const {
    return status == Status::Ok && (localRule || margin > kMarginFactor * maxStep);
  }
};

// Samples the displacement x -> f(x) - x along the closed curve, refining
// every adjacent pair until its angle increment is below pi/4 and its
// displacement change is small. "Small" comes in two strengths. The strict
// rule compares against the global minimum displacement, which is what the
// public winding predicate promises; since new samples can shrink that
// minimum below what earlier pairs were accepted against, accepted pairs are
// re-audited until the whole cycle is stable. The local rule compares each
// pair against its own endpoints instead, so sampling concentrates near close
// approaches to a zero and the cost grows only logarithmically as the curve
// passes nearer to one; the search uses it because quadtree cuts routinely
// land arbitrarily close to the very fixed points being certified.
//
// A sampled displacement at or below noiseFloor counts as an exact zero hit
// (degenerate, margin zero). Composed maps that return to the identity on a
// patch do so only up to roundoff there, and chasing that noise would tile
// the whole patch down to the tolerance scale.
WindingScan scan_winding(const MapHandle& f, const PolyArc& curve, int maxSamples,
                         bool localRule, double noiseFloor) {
  WindingScan scan;
  scan.localRule = localRule;
  const double total = curve.length();
  if (!curve.closed || curve.pts.size() < 3 || total <= 0.0) {
    scan.status = WindingScan::Status::Degenerate;
    return scan;
  }

  std::map<double, Point> samples;  // parameter in [0,1) -> displacement
  int evals = 0;
  auto eval = [&](double t) -> bool {
    if (++evals > maxSamples) {
      scan.status = WindingScan::Status::Budget;
      return false;
    }
    const Point x = curve.at(t >= 1.0 ? t - 1.0 : t);
    const auto y = f(x);
    if (!y) {
      scan.status = WindingScan::Status::Undefined;
      return false;
    }
    const Point d = *y - x;
    const double nd = d.norm();
    if (nd <= noiseFloor) {
      scan.margin = 0.0;
      scan.status = WindingScan::Status::Degenerate;
      return false;
    }
    scan.margin = std::min(scan.margin, nd);
    samples.emplace(t, d);
    return true;
  };

  // Seed with the curve vertices and a uniform floor of 16 samples.
  double cum = 0.0;
  for (std::size_t i = 0; i < curve.pts.size(); ++i) {
    if (!eval(cum / total)) return scan;
    cum += (curve.pts[(i + 1) % curve.pts.size()] - curve.pts[i]).norm();
  }
  for (int j = 0; j < 16; ++j) {
    const double t = j / 16.0;
    if (!samples.count(t) && !eval(t)) return scan;
  }

  auto needs_split = [&](const Point& a, const Point& b) {
    if (std::abs(std::atan2(cross2(a, b), a.dot(b))) >= kMaxIncrement) return true;
    const double bound = localRule ? std::min(a.norm(), b.norm()) : scan.margin;
    return kMarginFactor * (b - a).norm() >= bound;
  };

  for (int round = 0; round < 64; ++round) {
    std::deque<std::pair<double, double>> work;
    auto it = samples.begin();
    for (; it != samples.end(); ++it) {
      auto next = std::next(it);
      const double t1 = next == samples.end() ? samples.begin()->first + 1.0 : next->first;
      const Point& d1 = next == samples.end() ? samples.begin()->second : next->second;
      if (needs_split(it->second, d1)) work.emplace_back(it->first, t1);
    }
    if (work.empty()) break;
    if (round == 63) {
      scan.status = WindingScan::Status::Degenerate;
      return scan;
    }
    while (!work.empty()) {
      const auto [t0, t1] = work.front();
      work.pop_front();
      if (t1 - t0 <= 1e-15) {
        scan.status = WindingScan::Status::Degenerate;
        return scan;
      }
      const double tm = 0.5 * (t0 + t1);
      if (!eval(tm >= 1.0 ? tm - 1.0 : tm)) return scan;
      const Point& d0 = samples.find(t0 >= 1.0 ? t0 - 1.0 : t0)->second;
      const Point& dm = samples.find(tm >= 1.0 ? tm - 1.0 : tm)->second;
      const Point& d1 = samples.find(t1 >= 1.0 ? t1 - 1.0 : t1)->second;
      if (needs_split(d0, dm)) work.emplace_back(t0, tm);
      if (needs_split(dm, d1)) work.emplace_back(tm, t1);
    }
  }

  double totalAngle = 0.0;
  for (auto it = samples.begin(); it != samples.end(); ++it) {
    auto next = std::next(it);
    const Point& d1 = next == samples.end() ? samples.begin()->second : next->second;
    totalAngle += std::atan2(cross2(it->second, d1), it->second.dot(d1));
    scan.maxStep = std::max(scan.maxStep, (d1 - it->second).norm());
  }
  const long w = std::lround(totalAngle / (2.0 * std::numbers::pi));
  if (std::abs(totalAngle - 2.0 * std::numbers::pi * w) > std::numbers::pi / 2.0) {
    scan.status = WindingScan::Status::Degenerate;
    return scan;
  }
  scan.winding = static_cast<int>(w);
  return scan;
}

PolyArc box_boundary(const Box& b) {
  return PolyArc{{b.lo, {b.hi.x(), b.lo.y()}, b.hi, {b.lo.x(), b.hi.y()}}, true};
}

// Conservative box-versus-polygon overlap with per-edge bounding boxes.
struct RegionProbe {
  const PointList& loop;
  std::vector<Box> edgeBoxes;

  explicit RegionProbe(const PointList& l) : loop(l) {
    edgeBoxes.reserve(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      Box eb;
      eb.expand(loop[i]);
      eb.expand(loop[(i + 1) % loop.size()]);
      edgeBoxes.push_back(eb);
    }
  }

  bool meets(const Box& b) const {
    for (const auto& v : loop)
      if (b.contains(v)) return true;
    const Point c10{b.hi.x(), b.lo.y()};
    const Point c01{b.lo.x(), b.hi.y()};
    const Point corners[5] = {b.lo, c10, b.hi, c01, b.lo};
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (!edgeBoxes[i].intersects(b)) continue;
      const Point& a = loop[i];
      const Point& z = loop[(i + 1) % loop.size()];
      for (int j = 0; j < 4; ++j)
        if (segments_touch(a, z, corners[j], corners[j + 1])) return true;
    }
    return point_in_loop(b.center(), loop);
  }
};

struct QuadSearch {
  const MapHandle& f;
  const JordanDomain& region;
  double tol;
  SearchBudget budget;
  RegionProbe probe;
  double scale;
  double noiseFloor;
  FixedPointSearch out;

  QuadSearch(const MapHandle& fn, const JordanDomain& reg, double t, const SearchBudget& b)
      : f(fn),
        region(reg),
        tol(t),
        budget(b),
        probe(reg.boundary),
        scale(reg.bbox().diag()),
        noiseFloor(32.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0)) {}

  void charge_box() {
    if (++out.boxesProcessed > budget.maxBoxes) {
      dedupe();
      throw BudgetExceeded("fixed point search exceeded its box budget", out);
    }
  }

  void sample_interior(const Box& b, int k) {
    for (int iy = 1; iy <= k; ++iy)
      for (int ix = 1; ix <= k; ++ix) {
        const Point p{b.lo.x() + b.width() * ix / (k + 1), b.lo.y() + b.height() * iy / (k + 1)};
        if (!point_in_loop(p, region.boundary)) continue;
        const auto y = f(p);
        if (y) out.margin = std::min(out.margin, (*y - p).norm());
      }
  }

  FixedPointCertificate refine(const Box& found, int winding) {
    Box b = found;
    const double target = std::max(1e-12 * scale, 4.0 * std::numeric_limits<double>::min());
    for (int step = 0; step < 96 && b.diag() > target; ++step) {
      charge_box();
      // The zero can sit arbitrarily close to the midpoint cut, starving both
      // halves of margin, so fall back to off-center cuts before giving up.
      bool descended = false;
      for (const double frac : {0.5, 0.375, 0.625}) {
        Box h1 = b, h2 = b;
        if (b.width() >= b.height()) {
          h1.hi.x() = h2.lo.x() = b.lo.x() + frac * b.width();
        } else {
          h1.hi.y() = h2.lo.y() = b.lo.y() + frac * b.height();
        }
        for (const Box& h : {h1, h2}) {
          const WindingScan s = scan_winding(f, box_boundary(h), 4096, true, noiseFloor);
          out.margin = std::min(out.margin, s.margin);
          if (s.trusted() && s.winding != 0) {
            b = h;
            descended = true;
            break;
          }
        }
        if (descended) break;
      }
      if (!descended) break;
    }
    FixedPointCertificate cert;
    cert.box = b;
    cert.winding = winding;
    cert.witness = b.center();
    cert.tol = tol;
    if (const auto y = f(cert.witness)) cert.residual = (*y - cert.witness).norm();
    return cert;
  }

  void dedupe() {
    auto& certs = out.certificates;
    std::sort(certs.begin(), certs.end(),
              [](const FixedPointCertificate& a, const FixedPointCertificate& b) {
                return a.residual < b.residual;
              });
    std::vector<FixedPointCertificate> kept;
    for (const auto& c : certs) {
      bool dup = false;
      for (const auto& k : kept)
        if ((c.witness - k.witness).norm() <= 2.0 * tol) dup = true;
      if (!dup) kept.push_back(c);
    }
    certs = std::move(kept);
  }

  void run() {
    // Pad the root asymmetrically: the dyadic subdivision lattice of the raw
    // bounding box aligns with symmetric fixed points (a box corner or edge
    // through them), and an exact zero at a boundary sample would stop the
    // descent before it certifies anything.
    Box root = region.bbox();
    root.lo -= Point(0.93e-4 * scale, 1.71e-4 * scale);
    root.hi += Point(2.47e-4 * scale, 1.13e-4 * scale);
    std::vector<std::pair<Box, int>> stack{{root, 0}};
    while (!stack.empty()) {
      const auto [box, depth] = stack.back();
      stack.pop_back();
      charge_box();
      if (!probe.meets(box)) continue;

      auto subdivide = [&] {
        const Point c = box.center();
        stack.push_back({Box{box.lo, c}, depth + 1});
        stack.push_back({Box{{c.x(), box.lo.y()}, {box.hi.x(), c.y()}}, depth + 1});
        stack.push_back({Box{c, box.hi}, depth + 1});
        stack.push_back({Box{{box.lo.x(), c.y()}, {c.x(), box.hi.y()}}, depth + 1});
      };

      // Under the local rule a certifiable box resolves in a few hundred
      // samples, so the search stage fails unresolvable boxes fast and leaves
      // the large sample budget to the refinement stage.
      const WindingScan s = scan_winding(f, box_boundary(box), 512, true, noiseFloor);
      out.margin = std::min(out.margin, s.margin);
      if (s.trusted() && s.winding == 0) {
        if (depth < budget.exploreLevels && box.diag() > tol) {
          subdivide();
        } else {
          sample_interior(box, 3);
        }
        continue;
      }
      if (s.trusted() && s.winding != 0) {
        // Witnesses closer than twice the tolerance get merged anyway, so
        // below that scale subdividing cannot separate anything and the box
        // goes straight to refinement.
        if (box.diag() > 2.0 * tol) {
          subdivide();
        } else {
          out.certificates.push_back(refine(box, s.winding));
        }
        continue;
      }
      // Winding unavailable. A boundary that touched an exact fixed point
      // (typically an identity patch) or left the map's domain stops at the
      // exploration floor: descending to tol there can only multiply boxes,
      // not isolate anything. Unresolved but nonvanishing displacement keeps
      // subdividing, since smaller boxes separate it from its zero.
      const bool floorAtExplore =
          s.status == WindingScan::Status::Undefined ||
          (s.status == WindingScan::Status::Degenerate && s.margin == 0.0);
      const bool exhausted = floorAtExplore ? depth >= budget.exploreLevels : box.diag() <= tol;
      if (!exhausted) {
        subdivide();
      } else if (s.margin > 0.0) {
        sample_interior(box, 5);
      }
    }
    dedupe();
    // Keep only witnesses inside the region: a box straddling its boundary
    // can certify a fixed point that lies just outside.
    std::erase_if(out.certificates, [&](const FixedPointCertificate& c) {
      return locate(c.witness, region) == Location::Outside;
    });
  }
};

bool polygons_touch(const PointList& a, const PointList& b) {
  if (!bbox_of(a).intersects(bbox_of(b))) return false;
  std::vector<Box> bBoxes;
  bBoxes.reserve(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    Box eb;
    eb.expand(b[j]);
    eb.expand(b[(j + 1) % b.size()]);
    bBoxes.push_back(eb);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    Box ab;
    ab.expand(a[i]);
    ab.expand(a[(i + 1) % a.size()]);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!ab.intersects(bBoxes[j])) continue;
      if (segments_touch(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
    }
  }
  return point_in_loop(a.front(), b) || point_in_loop(b.front(), a);
}

Point overlap_witness(const PointList& a, const PointList& b) {
  for (const auto& v : a)
    if (point_in_loop(v, b)) return v;
  for (const auto& v : b)
    if (point_in_loop(v, a)) return v;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (segments_touch(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()]))
        return 0.5 * (a[i] + a[(i + 1) % a.size()]);
  return a.front();
}

}  // namespace

int displacement_winding(const MapHandle& f, const PolyArc& curve) {
  if (!curve.closed || curve.pts.size() < 3)
    throw InvalidInput("displacement winding needs a closed curve with at least 3 vertices");
  const WindingScan s = scan_winding(f, curve, 1 << 16, false, 0.0);
  switch (s.status) {
    case WindingScan::Status::Undefined:
      throw PreconditionViolation("map is undefined on the curve");
    case WindingScan::Status::Degenerate:
    case WindingScan::Status::Budget:
      throw MarginTooSmall("displacement does not resolve along the curve", s.margin);
    case WindingScan::Status::Ok:
      break;
  }
  if (!(s.margin > kMarginFactor * s.maxStep))
    throw MarginTooSmall("displacement margin below ten times the sampling increment", s.margin);
  return s.winding;
}

FixedPointSearch find_fixed_points(const MapHandle& f, const JordanDomain& region, double tol,
                                   const SearchBudget& budget) {
  if (!(tol > 0.0)) throw InvalidInput("fixed point tolerance must be positive");
  QuadSearch search(f, region, tol, budget);
  search.run();
  return std::move(search.out);
}

FixedPointSearch find_fixed_points(const MapHandle& f, const IntersectionComponent& C, double tol,
                                   const SearchBudget& budget) {
  return find_fixed_points(f, C.region, tol, budget);
}

EscapeField escape_map(const MapHandle& f, const IntersectionComponent& C, int gridN,
                       int maxIter) {
  if (gridN <= 0 || maxIter <= 0)
    throw InvalidInput("escape map needs a positive grid and iteration count");
  EscapeField field;
  field.box = C.region.bbox();
  field.nx = field.ny = gridN;
  field.maxIter = maxIter;
  field.times.assign(static_cast<std::size_t>(gridN) * gridN, EscapeField::kOutsideCell);
  for (int iy = 0; iy < gridN; ++iy)
    for (int ix = 0; ix < gridN; ++ix) {
      const Point x0 = field.cell_center(ix, iy);
      if (locate(x0, C.region) == Location::Outside) continue;
      int escape = EscapeField::kNonEscaping;
      Point cur = x0;
      for (int n = 1; n <= maxIter; ++n) {
        const auto next = f(cur);
        if (!next) {
          escape = n;  // left the map's domain, hence the component
          break;
        }
        cur = *next;
        if (locate(cur, C.region) == Location::Outside) {
          escape = n;
          break;
        }
      }
      field.times[static_cast<std::size_t>(iy) * gridN + ix] = escape;
    }
  return field;
}

std::vector<PeriodicOrbitReport> find_periodic(const MapHandle& f, const IntersectionComponent& C,
                                               int k, double tol,
                                               const PeriodicSearchOptions& opt) {
  if (k <= 0) throw InvalidInput("period must be positive");
  const JordanDomain& reg = C.region;

  MapHandle powerK;
  if (opt.itineraryFilter && k > 1) {
    powerK = [f, k, &reg](const Point& x) -> std::optional<Point> {
      Point cur = x;
      for (int j = 1; j < k; ++j) {
        const auto next = f(cur);
        if (!next || locate(*next, reg) == Location::Outside) return std::nullopt;
        cur = *next;
      }
      return f(cur);
    };
  } else {
    powerK = power(f, k);
  }

  const FixedPointSearch search = find_fixed_points(powerK, C, tol, opt.budget);

  auto component_id = [&](const Point& p) -> int {
    if (opt.components) {
      for (std::size_t i = 0; i < opt.components->size(); ++i)
        if (locate(p, (*opt.components)[i].region) != Location::Outside) return static_cast<int>(i);
      return -1;
    }
    return locate(p, reg) != Location::Outside ? 0 : -1;
  };

  std::vector<PeriodicOrbitReport> reports;
  for (const auto& cert : search.certificates) {
    PointList orbit{cert.witness};
    bool broken = false;
    for (int j = 1; j < k; ++j) {
      const auto next = f(orbit.back());
      if (!next) {
        broken = true;
        break;
      }
      orbit.push_back(*next);
    }
    if (broken) continue;
    const auto closure = f(orbit.back());
    if (!closure) continue;
    const double residual = (*closure - orbit.front()).norm();

    bool divisorPeriod = false;
    for (int m = 1; m < k && !divisorPeriod; ++m)
      if (k % m == 0 && (orbit[m] - orbit[0]).norm() <= tol) divisorPeriod = true;
    if (divisorPeriod) continue;

    bool duplicate = false;
    for (const auto& r : reports)
      for (const auto& p : r.orbitPoints)
        if ((p - orbit.front()).norm() <= 2.0 * tol) duplicate = true;
    if (duplicate) continue;

    PeriodicOrbitReport rep;
    rep.k = k;
    rep.orbitPoints = orbit;
    rep.residual = residual;
    for (const auto& p : orbit) rep.componentItinerary.push_back(component_id(p));
    rep.certificate = cert;
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<PeriodicOrbitReport> find_periodic(const PLHomeo& f, const IntersectionComponent& C,
                                               int k, double tol,
                                               const PeriodicSearchOptions& opt) {
  return find_periodic(f.as_map(), C, k, tol, opt);
}

FreeDiskReport free_disk_check(const MapHandle& F, const JordanDomain& U, int n) {
  if (n < 1) throw InvalidInput("free disk check needs n >= 1");
  const PointList base = densify_loop(U.boundary, U.perimeter() / 96.0);
  std::vector<PointList> images{base};
  for (int j = 1; j <= n; ++j) {
    PointList img;
    img.reserve(base.size());
    for (const auto& p : images.back()) {
      const auto y = F(p);
      if (!y) throw PreconditionViolation("image boundary left the evaluable region");
      img.push_back(*y);
    }
    images.push_back(std::move(img));
  }

  FreeDiskReport report;
  if (polygons_touch(images[0], images[1])) {
    report.witnessI = 0;
    report.witnessJ = 1;
    report.witness = overlap_witness(images[0], images[1]);
    return report;
  }
  report.preconditionHolds = true;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (polygons_touch(images[i], images[j])) {
        report.witnessI = i;
        report.witnessJ = j;
        report.witness = overlap_witness(images[i], images[j]);
        return report;
      }
  report.free = true;
  return report;
}

TheoremVerdict theorem_verdict(const MapHandle& f, const IntersectionComponent& C, int kMax,
                               double tol, const SearchBudget& budget) {
  TheoremVerdict out;
  out.kMax = kMax;
  const double effTol = tol > 0.0 ? tol : 1e-3 * C.region.bbox().diag();
  try {
    PeriodicSearchOptions opt;
    opt.budget = budget;
    for (int k = 1; k <= kMax; ++k) {
      auto reports = find_periodic(f, C, k, effTol, opt);
      out.periodic.insert(out.periodic.end(), reports.begin(), reports.end());
    }
    out.fixedPoints = find_fixed_points(f, C, effTol, budget);
  } catch (const BudgetExceeded& e) {
    out.verdict = TheoremVerdict::Verdict::Inconclusive;
    out.detail = e.what();
    return out;
  }

  if (out.periodic.empty() || !out.fixedPoints.certificates.empty()) {
    out.verdict = TheoremVerdict::Verdict::Consistent;
    return out;
  }
  out.verdict = TheoremVerdict::Verdict::Inconsistent;
  std::ostringstream repro;
  repro.precision(17);
  repro << "periodic orbit without a certified fixed point; kMax=" << kMax << " tol=" << effTol
        << " margin=" << out.fixedPoints.margin;
  for (const auto& r : out.periodic) {
    repro << "\n k=" << r.k << " residual=" << r.residual << " orbit=";
    for (const auto& p : r.orbitPoints) repro << " (" << p.x() << "," << p.y() << ")";
  }
  out.detail = repro.str();
  return out;
}

TheoremVerdict theorem_verdict(const PLHomeo& f, const IntersectionComponent& C, int kMax,
                               double tol, const SearchBudget& budget) {
  return theorem_verdict(f.as_map(), C, kMax, tol, budget);
}

}  // namespace planehomeo
