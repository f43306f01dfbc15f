#pragma once

#include <cstdint>
#include <vector>

#include "gutscat/cell_complex.hpp"
#include "gutscat/normal_surface.hpp"
#include "gutscat/triangulation.hpp"

namespace gutscat {

enum class PieceKind : std::uint8_t { TruncatedTet, TruncatedPrism, ProductBlock };

const char* to_string(PieceKind k);

/// Where a face of a piece sits. Faces in the boundary of a tetrahedron
/// carry the tetrahedron face and a region index within it; normal-disc
/// faces carry their disc type (corner 0..3, or 4 for the quad) and layer.
struct CutFaceInfo {
  int tet_face = -1;
  int region = -1;
  int disc_type = -1;
  int layer = -1;
};

struct CutPiece {
  PieceKind kind = PieceKind::TruncatedTet;
  int source_tet = 0;
  /// Product blocks: the disc type (corner 0..3 or 4 for quads) and the lower
  /// layer. Prisms: disc_type 4 and layer 0 for the side containing vertex 0,
  /// 1 for the other side.
  int disc_type = -1;
  int layer = -1;
  std::vector<std::int64_t> points;  // local vertex -> point on a tet edge
  std::vector<CutFaceInfo> faces;    // parallel to the cell's faces
  /// Product blocks only: 0 on the lower disc, 1 on the upper, and the
  /// vertex across the I-fibre.
  std::vector<int> level;
  std::vector<int> fiber;
};

/// M_* cut along S u S_v. Cell i of the complex is piece i; gluings are the
/// face pairings, frontier ones marked GlueKind::Frontier.
struct CutComplex {
  int tet_count = 0;
  NormalSurfaceVector surface;
  std::vector<CutPiece> pieces;
  PolyComplex complex;

  int frontier_count() const;
};

/// Requires an admissible, two-sided vector without vertex-linking
/// components; the vertex link is adjoined internally.
CutComplex cut_along(const Triangulation& tri, const NormalSurfaceVector& v);

struct PieceCensus {
  int truncated_tets = 0;
  int prisms = 0;
  int products = 0;
};

/// Counts by kind; throws InternalError if n > t or m > 2t.
PieceCensus piece_census(const CutComplex& cc);

/// Per tetrahedron: two prisms when a quad is present, otherwise one
/// truncated tetrahedron.
bool quad_rule_holds(const CutComplex& cc);

}  // namespace gutscat
