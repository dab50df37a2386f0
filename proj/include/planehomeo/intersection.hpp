#pragma once

#include "planehomeo/jordan.hpp"

#include <vector>

namespace planehomeo {

// Provenance of a boundary piece of an intersection component.
//   AlphaOnD: arc of the first domain's boundary whose interior lies strictly
//             inside the second domain;
//   BetaOnE:  arc of the second domain's boundary strictly inside the first;
//   Shared:   arc lying on both boundaries.
enum class PieceKind { AlphaOnD, BetaOnE, Shared };

struct BoundaryPiece {
  PieceKind kind;
  PolyArc arc;  // oriented along the component's CCW boundary; closed iff the
                // piece covers the entire component boundary
};

struct IntersectionComponent {
  JordanDomain region;
  std::vector<BoundaryPiece> pieces;

  std::vector<Point> alpha_endpoints() const;  // a_i, b_i pairs in boundary order
};

enum class LobeSide { EOutsideD, DOutsideE };

// Closure component of one domain minus an intersection component, attached to that
// component along its inner arc. For EOutsideD lobes the inner arc lies on the first
// domain's boundary (an alpha arc) and the outer arc on the second domain's. In the
// full-containment case the lobe degenerates to the annulus between the two
// boundaries; `annular` is set and `region` holds the outer domain.
struct Lobe {
  LobeSide side;
  int component = 0;    // index into the component list
  int piece = 0;        // index of the inner piece within that component
  bool annular = false;
  JordanDomain region;
  PolyArc inner;  // on the intersection component's boundary
  PolyArc outer;  // on the far side, oriented to close up with `inner` reversed
};

enum class UnionEdgeSource { FromD, FromE, SharedBoth };

// Outer boundary of the union of the two domains, with per-edge provenance and,
// for lobe-bounding edges, the owning lobe index (-1 otherwise). tag[i] describes
// the edge pts[i] -> pts[i+1 mod n].
struct UnionBoundary {
  PointList pts;
  std::vector<UnionEdgeSource> tags;
  std::vector<int> lobe_of_edge;
};

struct Decomposition {
  std::vector<IntersectionComponent> components;
  std::vector<Lobe> lobes;
  UnionBoundary union_outer;
  bool union_is_single_cycle = true;
  std::vector<std::string> warnings;
};

// Full boundary decomposition of the pair (D, E): intersection components with
// labeled boundary pieces, lobes on both sides, and the tagged union boundary.
//
// Degenerate-contact policy: overlapping collinear boundary arcs become Shared
// pieces; contacts that bound no area are dropped with a warning when positive-area
// components exist elsewhere; a purely one-dimensional collinear contact with no
// interior raises NonGenericContact; contacts that cannot be separated within the
// point tolerance raise NonGenericContact. Components thinner than the tolerance
// are discarded with a warning.
Decomposition decompose(const JordanDomain& D, const JordanDomain& E,
                        const Tolerances& tol = default_tolerances());

std::vector<IntersectionComponent> intersect_domains(const JordanDomain& D, const JordanDomain& E,
                                                     std::vector<std::string>* warnings = nullptr,
                                                     const Tolerances& tol = default_tolerances());

std::vector<Lobe> lobes(const JordanDomain& D, const JordanDomain& E,
                        const Tolerances& tol = default_tolerances());

}  // namespace planehomeo
