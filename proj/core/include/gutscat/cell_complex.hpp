#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "gutscat/smith.hpp"

namespace gutscat {

enum class FaceClass : std::uint8_t {
  DiscS,         // normal disc lying in S
  DiscSv,        // normal disc lying in the vertex link
  Hexagonal,
  QuadFace,      // quadrilateral face of a truncated prism
  VerticalQuad,  // side face of a product region
  Horizontal,    // top or bottom of an attached product cell
};

const char* to_string(FaceClass c);

/// A polyhedral 3-cell. Faces are cycles of local vertex indices, all
/// oriented by the same orientation of the cell.
struct PolyFace {
  std::vector<int> verts;
  FaceClass cls = FaceClass::DiscS;
};

struct PolyCell {
  int vertex_count = 0;
  std::vector<PolyFace> faces;
};

enum class GlueKind : std::uint8_t { Hexagonal, QuadQuad, Vertical, Frontier, Attach, Fold };

const char* to_string(GlueKind k);

struct FaceRef {
  int cell = -1;
  int face = -1;
  auto operator<=>(const FaceRef&) const = default;
};

/// Identifies face a with face b; position i of a's cycle goes to position
/// map[i] of b's cycle.
struct PolyGluing {
  FaceRef a, b;
  std::vector<int> map;
  GlueKind kind = GlueKind::Hexagonal;
  /// True when map reverses the cyclic order.
  bool reverses() const;
};

class PolyComplex {
 public:
  int add_cell(PolyCell cell);
  int add_gluing(PolyGluing g);

  const std::vector<PolyCell>& cells() const { return cells_; }
  const PolyCell& cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  const std::vector<PolyGluing>& gluings() const { return gluings_; }
  const PolyGluing& gluing(int i) const { return gluings_[static_cast<std::size_t>(i)]; }
  /// Gluing index at a face, or -1.
  int gluing_at(FaceRef f) const;
  /// The face on the other side of gluing g from f, and the vertex map from
  /// f's positions to the other face's positions.
  std::pair<FaceRef, std::vector<int>> across(int g, FaceRef f) const;

 private:
  std::vector<PolyCell> cells_;
  std::vector<PolyGluing> gluings_;
  std::map<FaceRef, int> at_;
};

/// Cellular chain complex of dimension <= 3. occ[k][i] lists the
/// (k-1)-cells in the boundary of k-cell i with multiplicity; d[k] is the
/// signed boundary matrix (rows: (k-1)-cells, cols: k-cells).
struct ChainComplex {
  std::array<int, 4> dims{0, 0, 0, 0};
  std::array<SparseMatrix, 4> d;
  std::array<std::vector<std::vector<int>>, 4> occ;

  int euler_char() const { return dims[0] - dims[1] + dims[2] - dims[3]; }
  HomologyGroup homology(int k) const;
  /// H_1 after attaching one 2-cell along each given 1-cycle.
  HomologyGroup h1_with_discs(const std::vector<std::map<int, std::int64_t>>& cycles) const;
  /// Removes the closure of the listed 2-cells (the relative complex
  /// C / C(A)). index, when given, receives old -> new cell numbers (-1 for
  /// removed cells).
  ChainComplex relative_to(const std::vector<int>& two_cells, std::array<std::vector<int>, 4>* index = nullptr) const;
  /// True when d_{k-1} d_k = 0 for all k.
  bool is_complex() const;
};

struct QuotientSpec {
  std::vector<int> cells;
  /// Which gluings between selected cells to apply; all when empty.
  std::function<bool(const PolyGluing&)> use_gluing;
  /// Groups of boundary faces, each capped by a ball.
  std::vector<std::vector<FaceRef>> caps;
};

/// The CW complex obtained from a set of cells under a set of gluings.
class CellQuotient {
 public:
  CellQuotient(const PolyComplex& pc, QuotientSpec spec);

  const ChainComplex& chains() const { return chains_; }
  const PolyComplex& poly() const { return *pc_; }
  const std::vector<int>& cells() const { return spec_.cells; }

  int vertex_of(int cell, int v) const;
  /// Edge id and +1/-1 for the direction u -> v.
  std::pair<int, int> edge_of(int cell, int u, int v) const;
  /// 2-cell id and the sign of the face's own cycle against it.
  std::pair<int, int> face_of(FaceRef f) const;
  const std::vector<FaceRef>& face_refs(int two_cell) const { return refs_[static_cast<std::size_t>(two_cell)]; }
  /// 2-cells met by exactly one 3-cell.
  std::vector<int> boundary_faces() const;
  bool contains(int cell) const { return local_.count(cell) > 0; }

 private:
  const PolyComplex* pc_;
  QuotientSpec spec_;
  std::map<int, int> local_;                      // poly cell -> 3-cell id
  std::vector<int> vert_off_, edge_off_, face_off_;  // per selected cell
  std::vector<std::map<std::pair<int, int>, int>> local_edges_;
  std::vector<int> vclass_, eclass_, eparity_, fclass_, fsign_;
  std::vector<std::vector<FaceRef>> refs_;
  ChainComplex chains_;
};

struct BoundaryComponent {
  std::vector<int> faces;  // 2-cell ids
  int euler_char = 0;
  bool contains_sv = false;
  bool sv_only = false;
  std::vector<int> annuli;  // distinct pattern labels met, sorted
  int annulus_faces = 0;
};

/// Components of the boundary surface, grouped through shared edges.
/// annulus_of returns a pattern label (>= 0) or -1 for a boundary face.
std::vector<BoundaryComponent> boundary_inventory(const CellQuotient& q,
                                                  const std::function<int(FaceRef)>& annulus_of);

/// Euler characteristic of the closure of a set of 2-cells.
int surface_euler_char(const CellQuotient& q, const std::vector<int>& two_cells);

/// Boundary circles of a surface given by 2-cells, as signed edge cycles.
std::vector<std::map<int, std::int64_t>> boundary_circles(const CellQuotient& q, const std::vector<int>& two_cells);

}  // namespace gutscat
