#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gutscat/triangulation.hpp"

namespace gutscat {

/// Standard normal coordinates: per tetrahedron four triangle counts (indexed
/// by the corner they cut off) followed by three quad counts (quad types
/// {01|23}, {02|13}, {03|12}). Values are overflow-checked 64-bit integers.
class NormalSurfaceVector {
 public:
  NormalSurfaceVector() = default;
  explicit NormalSurfaceVector(std::vector<std::int64_t> coords);
  static NormalSurfaceVector zero(int tet_count);

  int tet_count() const { return static_cast<int>(coords_.size() / 7); }
  std::size_t size() const { return coords_.size(); }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  std::int64_t tri(int tet, int corner) const { return coords_[static_cast<std::size_t>(7 * tet + corner)]; }
  std::int64_t quad(int tet, int type) const { return coords_[static_cast<std::size_t>(7 * tet + 4 + type)]; }
  void set_tri(int tet, int corner, std::int64_t v) { coords_[static_cast<std::size_t>(7 * tet + corner)] = v; }
  void set_quad(int tet, int type, std::int64_t v) { coords_[static_cast<std::size_t>(7 * tet + 4 + type)] = v; }

  /// The quad type present in tet, or -1. Assumes the quad constraint.
  int quad_type(int tet) const;
  std::int64_t quad_count(int tet) const;

  bool is_zero() const;
  NormalSurfaceVector operator+(const NormalSurfaceVector& other) const;
  NormalSurfaceVector scaled(std::int64_t k) const;

  std::string str() const;

  bool operator==(const NormalSurfaceVector&) const = default;
  auto operator<=>(const NormalSurfaceVector&) const = default;

 private:
  std::vector<std::int64_t> coords_;
};

/// Parses whitespace-separated integers (one vector per file).
NormalSurfaceVector parse_surface(const std::string& text);
NormalSurfaceVector load_surface(const std::string& path);

/// The normal sphere linking the unique vertex: every triangle coordinate 1.
NormalSurfaceVector vertex_link(const Triangulation& tri);

/// One row per (glued face pair, normal arc type); a vector satisfies the
/// matching equations iff matrix * v == 0.
std::vector<std::vector<int>> matching_matrix(const Triangulation& tri);

bool satisfies_matching(const Triangulation& tri, const NormalSurfaceVector& v);
bool satisfies_quad_constraint(const NormalSurfaceVector& v);

/// Quad constraint, non-negativity and matching equations. Throws DomainError
/// when the length is not 7t.
bool is_admissible(const Triangulation& tri, const NormalSurfaceVector& v);

struct SurfaceComponent {
  int euler_char = 0;
  bool orientable = true;
  bool two_sided = true;
  bool is_vertex_linking = false;
  std::int64_t disc_count = 0;
};

/// The embedded surface realised by an admissible vector.
struct SurfaceComplex {
  std::vector<SurfaceComponent> components;
  std::vector<std::int64_t> disc_counts;  // copy of the coordinates
  int vertices = 0, edges = 0, faces = 0;

  int euler_char() const { return vertices - edges + faces; }
  bool two_sided() const;
};

SurfaceComplex build_surface(const Triangulation& tri, const NormalSurfaceVector& v);

/// Removes the largest multiple of the vertex link that keeps every
/// coordinate non-negative.
NormalSurfaceVector strip_vertex_linking(const NormalSurfaceVector& v);

struct EnumerationOptions {
  /// Rejects boxes whose naive size 7t*log2(k+1) exceeds this many bits.
  double guard_bits = 40.0;
  int threads = 1;
};

/// All admissible vectors with every coordinate <= bound and no
/// vertex-linking part, in lexicographic order.
std::vector<NormalSurfaceVector> enumerate_admissible(const Triangulation& tri, int bound,
                                                      const EnumerationOptions& opts = {});

}  // namespace gutscat
