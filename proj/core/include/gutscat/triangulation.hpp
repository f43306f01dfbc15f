#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gutscat/perm4.hpp"

namespace gutscat {

/// Face `f` of some tetrahedron glued to face `perm[f]` of `tet`; vertex v
/// of the source goes to vertex perm[v] of the target.
struct FaceGluing {
  int tet = -1;
  Perm4 perm;
  bool operator==(const FaceGluing&) const = default;
};

/// A gluing table of tetrahedra. Faces are indexed by their opposite vertex.
/// Unglued faces are allowed so that broken tables can be parsed and then
/// reported on by validate(); the gluing relation itself is always a
/// fixed-point-free involution.
class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::vector<std::array<std::optional<FaceGluing>, 4>> gluings);

  int size() const { return static_cast<int>(gluings_.size()); }
  const std::optional<FaceGluing>& gluing(int tet, int face) const {
    return gluings_[static_cast<std::size_t>(tet)][static_cast<std::size_t>(face)];
  }
  bool is_closed() const;

  /// Orientation sign per tetrahedron such that every gluing reverses
  /// orientation; empty when the triangulation is non-orientable.
  std::optional<std::vector<int>> orientation() const;

  /// Number of vertex classes under the gluings.
  int vertex_count() const;

  /// Number of edge classes, and whether any edge is glued to itself reversed.
  int edge_count() const;
  bool edges_valid() const;

  /// Returns a copy with tetrahedra renumbered: old tet i becomes perm[i].
  Triangulation relabeled(const std::vector<int>& perm) const;

  bool operator==(const Triangulation&) const = default;

 private:
  std::vector<std::array<std::optional<FaceGluing>, 4>> gluings_;
};

struct ValidationReport {
  bool closed = false;
  bool orientable = false;
  int vertex_count = 0;
  int vertex_link_euler = 0;
  bool vertex_link_connected = false;
  bool edges_valid = false;

  /// All preconditions of the cutting pipeline hold.
  bool ok() const {
    return closed && orientable && vertex_count == 1 && vertex_link_euler == 2 && vertex_link_connected &&
           edges_valid;
  }
};

/// Parses the gluing-table text format: one line per tetrahedron with four
/// tokens "j:p0p1p2p3" (or "-" for an unglued face); '#' starts a comment.
Triangulation parse_triangulation(const std::string& text);
Triangulation load_triangulation(const std::string& path);

/// Canonical text form (no comments, single spaces, trailing newline).
std::string serialize(const Triangulation& tri);

/// Strips comments and blank lines and collapses whitespace, so that
/// serialize(parse(text)) == normalize_table_text(text) for valid input.
std::string normalize_table_text(const std::string& text);

ValidationReport validate(const Triangulation& tri);

/// Throws DomainError unless validate(tri).ok().
void require_valid_one_vertex(const Triangulation& tri);

}  // namespace gutscat
