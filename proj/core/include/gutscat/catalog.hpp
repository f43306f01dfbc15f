#pragma once

#include <map>
#include <string>
#include <vector>

#include "gutscat/cut_complex.hpp"
#include "gutscat/exact.hpp"
#include "gutscat/gi_decomposition.hpp"
#include "gutscat/normal_surface.hpp"

namespace gutscat {

/// What the pipeline did with one surface.
struct SurfaceRecord {
  NormalSurfaceVector surface;
  bool skipped = false;
  std::string skip_reason;
  PieceCensus census;
  int nodes_first = 0;
  int annuli_first = 0;
  int annuli_final = 0;
  int absorb_steps = 0;
  int unknown = 0;
  std::vector<std::string> guts;  // signatures of the final guts pieces, sorted
  std::vector<IBundleDescriptor> ibundles;
  std::vector<std::string> notes;
};

/// Cut, assemble, absorb and plug the ball for one surface. One-sided
/// surfaces are skipped, not errors.
SurfaceRecord process_surface(const Triangulation& tri, const NormalSurfaceVector& v);

struct CatalogOptions {
  int threads = 1;
  double guard_bits = 40.0;
};

struct Catalog {
  int tet_count = 0;
  int bound = 0;
  std::vector<SurfaceRecord> surfaces;        // enumeration order
  std::map<std::string, int> signatures;      // signature -> number of pieces

  /// 5^t.
  BigInt crude_bound() const;
  bool within_bound() const { return BigInt(signatures.size()) <= crude_bound(); }
};

Catalog build_catalog(const Triangulation& tri, int bound, const CatalogOptions& opts = {});

}  // namespace gutscat
