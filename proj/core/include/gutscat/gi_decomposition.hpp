#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gutscat/cell_complex.hpp"
#include "gutscat/cut_complex.hpp"

namespace gutscat {

enum class NodeKind : std::uint8_t { Guts, IBundle, PseudoGuts, PseudoIBundle };
enum class Stage : std::uint8_t { FirstApprox, Absorbed, BallPlugged };
enum class TinyType : std::uint8_t { I, II, III, Unknown };

const char* to_string(NodeKind k);
const char* to_string(Stage s);
const char* to_string(TinyType t);

inline bool guts_family(NodeKind k) { return k == NodeKind::Guts || k == NodeKind::PseudoGuts; }

// Cell tags used by signatures; cut pieces use their PieceKind value.
inline constexpr int kTagTruncatedTet = 0;
inline constexpr int kTagPrism = 1;
inline constexpr int kTagProduct = 2;
inline constexpr int kTagVoxel = 3;
inline constexpr int kTagPunctureCap = 4;
inline constexpr int kTagSurfaceProduct = 5;

/// One side of a frontier annulus: the faces of the side's cells.
struct AnnulusSide {
  int node = -1;
  std::vector<FaceRef> faces;
};

struct FrontierAnnulus {
  int id = -1;                 // stable label from the first approximation
  std::vector<int> gluings;    // frontier gluings making up the annulus
  std::array<AnnulusSide, 2> sides;
  int euler_char = 0;
  int boundary_circles = 0;
};

struct DecompNode {
  NodeKind kind = NodeKind::Guts;
  std::vector<int> cells;  // sorted
  bool sv_capped = false;
};

struct IBundleDescriptor {
  int node = -1;
  int base_euler = 0;
  bool base_orientable = true;
  bool twisted = false;
  int base_boundary_circles = 0;
  int vertical_boundary_annuli = 0;
  /// Whether the base was read off the I-fibres of product blocks; pseudo
  /// I-bundles fall back to homotopy data.
  bool from_fibres = false;
};

struct AbsorbStep {
  TinyType type = TinyType::Unknown;
  std::vector<int> tiny_nodes;      // nodes forming P
  std::vector<int> bounding;        // annulus ids A_i (A_j)
  std::vector<int> removed;         // all annulus ids deleted
  int annuli_before = 0, annuli_after = 0;
  NodeKind merged_kind = NodeKind::Guts;
  bool mixed_neighbours = false;
};

struct TinyCandidate {
  std::vector<int> nodes;
  std::vector<int> bounding;  // annulus ids
  int internal_annuli = 0;
  TinyType type = TinyType::Unknown;
  std::string reason;  // why an unknown candidate stalled
};

/// The decomposition of M_* cut along S into guts and I-bundle nodes glued
/// along frontier annuli. Node cells refer to the shared complex.
struct GIDecomposition {
  PolyComplex complex;
  std::vector<int> cell_tag;
  std::vector<DecompNode> nodes;
  std::vector<FrontierAnnulus> annuli;  // active annuli only
  Stage stage = Stage::FirstApprox;
  std::vector<AbsorbStep> history;
  std::vector<TinyCandidate> unknown;  // candidates left undecided
  std::vector<std::string> notes;

  int node_of(int cell) const;
  /// Active annulus (id, side) owning a face, if any.
  std::optional<std::pair<int, int>> annulus_at(FaceRef f) const;
  const FrontierAnnulus& annulus(int id) const;
};

/// A connected piece with its ∂-pattern, as a self-contained complex.
struct PatternedManifold {
  NodeKind kind = NodeKind::Guts;
  PolyComplex complex;
  std::vector<int> cell_tag;
  std::map<FaceRef, int> pattern;  // boundary face -> local annulus label
  int annulus_count = 0;
  bool sv_capped = false;
  std::vector<int> source_cells;

  CellQuotient quotient() const;
  /// Boundary components; annulus labels are the local ones.
  std::vector<BoundaryComponent> boundary() const;
  HomologyGroup homology(int k) const;
  /// Pattern annulus faces as 2-cells of quotient(), per label.
  std::vector<std::vector<int>> annulus_cells(const CellQuotient& q) const;
};

/// Generic assembly: nodes from a cell labelling; annuli are the
/// components of Frontier gluings between different nodes.
GIDecomposition assemble_nodes(PolyComplex complex, std::vector<int> cell_tag, const std::vector<int>& node_of_cell,
                               const std::vector<NodeKind>& kinds);

GIDecomposition assemble_first(const CutComplex& cc);

/// Extracts cells as a patterned manifold; gluings belonging to the listed
/// annuli are left open and their faces marked.
PatternedManifold extract(const GIDecomposition& d, const std::vector<int>& cells, const std::vector<int>& pattern_annuli,
                          NodeKind kind, bool sv_capped);
PatternedManifold node_piece(const GIDecomposition& d, int node);

/// Candidates separated by one or two annuli, screened for tininess.
std::vector<TinyCandidate> detect_tiny(const GIDecomposition& d);

/// Classifies one candidate: nullopt when it is certainly not tiny.
std::optional<TinyCandidate> classify_candidate(const GIDecomposition& d, const std::vector<int>& nodes,
                                                const std::vector<int>& bounding);

/// Absorbs tiny pieces to the fixed point (stage Absorbed).
GIDecomposition absorb_tiny(GIDecomposition d);
/// Caps the vertex-link sphere with a ball (stage BallPlugged).
GIDecomposition plug_ball(GIDecomposition d);
/// absorb_tiny followed by plug_ball.
GIDecomposition absorb(GIDecomposition d);

std::vector<IBundleDescriptor> ibundle_descriptors(const GIDecomposition& d);
IBundleDescriptor describe_ibundle(const GIDecomposition& d, int node);

/// Canonical encoding, invariant under relabelling cells, faces, vertices
/// and pattern labels.
std::string signature(const PatternedManifold& p);
/// 16 hex digits of the FNV-1a hash of a signature.
std::string signature_digest(const std::string& sig);

/// M_S^{2*}: each guts-family node with every pattern annulus capped by a
/// copy of (T* x I, ∂T* x I).
std::vector<PatternedManifold> cap_with_punctured_torus(const GIDecomposition& d);

}  // namespace gutscat
