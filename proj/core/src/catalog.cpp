#include "gutscat/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "gutscat/error.hpp"

namespace gutscat {

SurfaceRecord process_surface(const Triangulation& tri, const NormalSurfaceVector& v) {
  SurfaceRecord rec;
  rec.surface = v;
  if (!build_surface(tri, v).two_sided()) {
    rec.skipped = true;
    rec.skip_reason = "one-sided";
    return rec;
  }
  const CutComplex cc = cut_along(tri, v);
  rec.census = piece_census(cc);
  const GIDecomposition first = assemble_first(cc);
  rec.nodes_first = static_cast<int>(first.nodes.size());
  rec.annuli_first = static_cast<int>(first.annuli.size());
  const GIDecomposition d = absorb(first);
  rec.annuli_final = static_cast<int>(d.annuli.size());
  rec.absorb_steps = static_cast<int>(d.history.size());
  rec.unknown = static_cast<int>(d.unknown.size());
  rec.notes = d.notes;
  for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n)
    if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) rec.guts.push_back(signature(node_piece(d, n)));
  std::sort(rec.guts.begin(), rec.guts.end());
  rec.ibundles = ibundle_descriptors(d);
  return rec;
}

BigInt Catalog::crude_bound() const {
  BigInt b = 1;
  for (int i = 0; i < tet_count; ++i) b *= 5;
  return b;
}

Catalog build_catalog(const Triangulation& tri, int bound, const CatalogOptions& opts) {
  require_valid_one_vertex(tri);
  Catalog cat;
  cat.tet_count = tri.size();
  cat.bound = bound;
  EnumerationOptions eo;
  eo.guard_bits = opts.guard_bits;
  eo.threads = opts.threads;
  const auto vectors = enumerate_admissible(tri, bound, eo);
  cat.surfaces.resize(vectors.size());
  // Surfaces are independent; results land in enumeration order.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(vectors.size());
  const auto work = [&] {
    for (std::size_t i = next++; i < vectors.size(); i = next++) {
      try {
        cat.surfaces[i] = process_surface(tri, vectors[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(opts.threads, static_cast<int>(vectors.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& rec : cat.surfaces)
    for (const auto& s : rec.guts) ++cat.signatures[s];
  return cat;
}

}  // namespace gutscat
