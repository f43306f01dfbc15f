#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gutscat/gi_decomposition.hpp"
#include "gutscat/normal_surface.hpp"

namespace gutscat {

/// max(0, -chi) summed over components.
int chi_minus(const std::vector<int>& component_euler);
int chi_minus(const SurfaceComplex& surface);

/// Which part of the boundary a relative complex is taken against.
struct RelSelector {
  enum class Kind : std::uint8_t { None, Boundary, Pattern, Complement, Component };
  Kind kind = Kind::None;
  int component = -1;

  /// "none", "boundary", "pattern", "complement" (boundary off the pattern)
  /// or "component:i".
  static RelSelector parse(const std::string& text);
  std::string str() const;
};

struct ComplexityReport {
  /// chi_- of the components of the selected boundary subsurface.
  std::vector<int> chi_minus_per_component;
  int chi_minus_total = 0;
  int h2_rank = 0;
  HomologyGroup h1;
  std::array<HomologyGroup, 4> homology;
  std::array<int, 4> relative_dims{0, 0, 0, 0};

  /// sum (-1)^k rank H_k == sum (-1)^k dim C_k.
  bool euler_consistent() const;
};

/// The selected boundary 2-cells of q, sorted. Throws DomainError when the
/// selector names a missing boundary component.
std::vector<int> selected_faces(const PatternedManifold& p, const CellQuotient& q, const RelSelector& rel);

/// The relative chain complex C(p) / C(selected faces), and the map from
/// 2-cells of the absolute quotient to relative ones (-1 when removed).
struct RelativeComplex {
  ChainComplex chains;
  std::vector<int> face_index;
  std::vector<int> selected;
};
RelativeComplex relative_complex(const PatternedManifold& p, const CellQuotient& q, const RelSelector& rel);

ComplexityReport relative_homology(const PatternedManifold& p, const RelSelector& rel);

/// TN of a generating set: the largest value, 0 when empty.
int tn_of_set(const std::vector<int>& norm_values);

/// A relative 2-cycle over the relative 2-cells, with a chi_- value.
struct RelativeCycle {
  std::vector<BigInt> coefficients;
  int chi_minus = 0;
};

/// Whether the cycles generate H_2 of the relative complex.
struct SpanCheck {
  bool cycles_closed = false;  // every cycle lies in ker d_2
  int kernel_rank = 0;
  int span_rank = 0;
  bool saturated = false;  // all invariant factors of [cycles | d_3] are 1
  bool generates() const { return cycles_closed && span_rank == kernel_rank && saturated; }
};
SpanCheck span_check(const ChainComplex& rel, const std::vector<RelativeCycle>& cycles);

struct TNBound {
  bool generating = false;
  std::optional<int> bound;       // absent when some piece fails the span check
  std::vector<int> per_piece;     // -1 for a failed piece
  std::vector<std::string> failures;
};

/// Upper bound for TN(G', dG' - int A'). For each piece, the least threshold
/// tau whose cycles with chi_- <= tau still generate the relative H_2; the
/// bound is the largest of these. Adding cycles never raises it.
TNBound tn_upper_bound(const std::vector<PatternedManifold>& pieces,
                       const std::vector<std::vector<RelativeCycle>>& candidates,
                       const RelSelector& rel = {RelSelector::Kind::Complement, -1});

/// A Z-basis of the relative 2-cycles, each with a chi_- value read from the
/// closure of its support (times its largest coefficient).
std::vector<RelativeCycle> kernel_cycles(const PatternedManifold& p, const RelSelector& rel);

/// One I-bundle N(F) considered for the separating refinement.
struct SeparatingCarve {
  int ibundle = -1;  // node
  int piece = -1;    // index into guts_prime, -1 when skipped
  bool skipped = false;
  std::string reason;
  int chi_f = 0;
  int circles = 0;
  int chi_q = 0;           // 1 - circles
  int chi_q_cells = 0;     // read off the attached cells
  int chi_base_prime = 0;  // chi(F) - chi(Q)
};

struct SeparatingRefinement {
  std::vector<PatternedManifold> guts_prime;
  /// New annuli A': per piece, the pattern labels created by carving.
  std::vector<std::vector<int>> annuli_prime;
  std::vector<SeparatingCarve> carves;
  /// Total boundary Euler characteristic of guts and carved I-bundles,
  /// before and after.
  int boundary_euler_before = 0;
  int boundary_euler_after = 0;
};

/// Carves from each I-bundle whose annuli all face guts a planar Q with one
/// more boundary circle than its base, and glues N(Q) to the guts along the
/// old annuli. The annulus over the new circle becomes the pattern.
SeparatingRefinement refine_separating(const GIDecomposition& d);

}  // namespace gutscat
