#pragma once

#include <array>
#include <vector>

#include "gutscat/cell_complex.hpp"

namespace gutscat {

/// The quads of a pattern annulus in cyclic order. For quad k, pos[k] lists
/// the face positions playing the roles (bottom start, bottom end, top end,
/// top start) as the walk crosses it.
struct AnnulusWalk {
  std::vector<FaceRef> quads;
  std::vector<std::array<int, 4>> pos;

  AnnulusWalk reversed() const;
};

/// Walks the quads of an annulus. Vertical edges are those shared by two
/// annulus quads. Throws DomainError if the faces are not a quad annulus.
AnnulusWalk walk_annulus(const CellQuotient& q, std::vector<FaceRef> faces);

/// One side of a polygon: either half of a folded pair (side `fold` of the
/// pair, read backwards when inverse), the k-th quad of annulus walk
/// `annulus`, or left free.
struct PolygonSide {
  int fold = -1;
  bool inverse = false;
  int annulus = -1;
  int index = 0;
  bool free = false;
};

/// Adds the prism P x I over a polygon with the given sides, folds its
/// paired sides and attaches annulus sides to the walks' quads. Face 0 is
/// P x 0, face 1 is P x 1 and face 2+i lies over side i. A walk is reversed
/// when needed so that every attaching map reverses orientation.
/// Attaching gluings get the kind `attach`; pass Frontier to keep the prism
/// a separate node of a decomposition.
int attach_polygon_prism(PolyComplex& pc, const std::vector<PolygonSide>& sides, std::vector<AnnulusWalk> walks,
                         GlueKind attach = GlueKind::Attach);

/// Sides for a once-punctured torus whose boundary runs along an annulus
/// walk with m quads: C_1 ... C_m a b a^-1 b^-1.
std::vector<PolygonSide> punctured_torus_sides(int m);

/// Sides for a planar surface with circles running along the given walks
/// plus one new circle of three sides, which come first:
/// N_1 N_2 N_3 (e_1 C_1 e_1^-1) (e_2 C_2 e_2^-1) ...
std::vector<PolygonSide> planar_sides(const std::vector<int>& walk_lengths);

}  // namespace gutscat
