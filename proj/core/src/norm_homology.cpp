#include "gutscat/norm_homology.hpp"

#include <algorithm>
#include <set>

#include "gutscat/capping.hpp"
#include "gutscat/error.hpp"
#include "union_find.hpp"

namespace gutscat {

using detail::UnionFind;

int chi_minus(const std::vector<int>& component_euler) {
  int total = 0;
  for (int chi : component_euler) total += std::max(0, -chi);
  return total;
}

int chi_minus(const SurfaceComplex& surface) {
  std::vector<int> chis;
  for (const auto& c : surface.components) chis.push_back(c.euler_char);
  return chi_minus(chis);
}

RelSelector RelSelector::parse(const std::string& text) {
  if (text == "none") return {Kind::None, -1};
  if (text == "boundary") return {Kind::Boundary, -1};
  if (text == "pattern") return {Kind::Pattern, -1};
  if (text == "complement") return {Kind::Complement, -1};
  const std::string prefix = "component:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        num.size() > 9)
      throw DomainError("bad boundary component index in selector '" + text + "'");
    return {Kind::Component, std::stoi(num)};
  }
  throw DomainError("unknown relative selector '" + text + "'");
}

std::string RelSelector::str() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Boundary: return "boundary";
    case Kind::Pattern: return "pattern";
    case Kind::Complement: return "complement";
    case Kind::Component: return "component:" + std::to_string(component);
  }
  return "?";
}

bool ComplexityReport::euler_consistent() const {
  int ranks = 0, cells = 0;
  for (int k = 0; k < 4; ++k) {
    const int sign = k % 2 ? -1 : 1;
    ranks += sign * homology[static_cast<std::size_t>(k)].rank;
    cells += sign * relative_dims[static_cast<std::size_t>(k)];
  }
  return ranks == cells;
}

namespace {

// Components of a set of 2-cells, joined through shared edges.
std::vector<std::vector<int>> face_components(const CellQuotient& q, const std::vector<int>& faces) {
  UnionFind uf(faces.size());
  std::map<int, std::size_t> by_edge;
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (int e : q.chains().occ[2][static_cast<std::size_t>(faces[i])]) {
      auto [it, fresh] = by_edge.emplace(e, i);
      if (!fresh) uf.unite(i, it->second);
    }
  std::map<std::size_t, std::vector<int>> groups;
  for (std::size_t i = 0; i < faces.size(); ++i) groups[uf.find(i)].push_back(faces[i]);
  std::vector<std::vector<int>> out;
  for (auto& [r, fs] : groups) out.push_back(std::move(fs));
  return out;
}

std::vector<int> component_chis(const CellQuotient& q, const std::vector<int>& faces) {
  std::vector<int> out;
  for (const auto& comp : face_components(q, faces)) out.push_back(surface_euler_char(q, comp));
  return out;
}

}  // namespace

std::vector<int> selected_faces(const PatternedManifold& p, const CellQuotient& q, const RelSelector& rel) {
  std::set<int> pattern;
  for (const auto& cells : p.annulus_cells(q)) pattern.insert(cells.begin(), cells.end());
  std::vector<int> out;
  switch (rel.kind) {
    case RelSelector::Kind::None:
      break;
    case RelSelector::Kind::Boundary:
      out = q.boundary_faces();
      break;
    case RelSelector::Kind::Pattern:
      out.assign(pattern.begin(), pattern.end());
      break;
    case RelSelector::Kind::Complement:
      for (int f : q.boundary_faces())
        if (!pattern.count(f)) out.push_back(f);
      break;
    case RelSelector::Kind::Component: {
      const auto comps = boundary_inventory(q, {});
      if (rel.component < 0 || rel.component >= static_cast<int>(comps.size()))
        throw DomainError("selector names boundary component " + std::to_string(rel.component) + " but there are " +
                          std::to_string(comps.size()));
      out = comps[static_cast<std::size_t>(rel.component)].faces;
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RelativeComplex relative_complex(const PatternedManifold& p, const CellQuotient& q, const RelSelector& rel) {
  RelativeComplex out;
  out.selected = selected_faces(p, q, rel);
  std::array<std::vector<int>, 4> index;
  out.chains = q.chains().relative_to(out.selected, &index);
  out.face_index = std::move(index[2]);
  return out;
}

ComplexityReport relative_homology(const PatternedManifold& p, const RelSelector& rel) {
  const auto q = p.quotient();
  const auto rc = relative_complex(p, q, rel);
  ComplexityReport r;
  for (int chi : component_chis(q, rc.selected)) r.chi_minus_per_component.push_back(std::max(0, -chi));
  for (int x : r.chi_minus_per_component) r.chi_minus_total += x;
  for (int k = 0; k < 4; ++k) r.homology[static_cast<std::size_t>(k)] = rc.chains.homology(k);
  r.relative_dims = rc.chains.dims;
  r.h1 = r.homology[1];
  r.h2_rank = r.homology[2].rank;
  return r;
}

int tn_of_set(const std::vector<int>& norm_values) {
  int out = 0;
  for (int v : norm_values) out = std::max(out, v);
  return out;
}

SpanCheck span_check(const ChainComplex& rel, const std::vector<RelativeCycle>& cycles) {
  SpanCheck s;
  const int n2 = rel.dims[2];
  s.kernel_rank = n2 - matrix_rank(rel.d[2]);
  s.cycles_closed = true;
  const SparseMatrix by_face = rel.d[2].transposed();
  SparseMatrix span(n2, 0);
  for (const auto& c : cycles) {
    if (static_cast<int>(c.coefficients.size()) != n2) throw DomainError("relative cycle has the wrong length");
    std::map<int, BigInt> image;
    for (int f = 0; f < n2; ++f) {
      if (c.coefficients[static_cast<std::size_t>(f)] == 0) continue;
      for (auto [e, a] : by_face.row(f)) image[e] += a * c.coefficients[static_cast<std::size_t>(f)];
    }
    for (const auto& [e, v] : image)
      if (v != 0) s.cycles_closed = false;
    const int col = span.add_col();
    for (int f = 0; f < n2; ++f) {
      const BigInt& v = c.coefficients[static_cast<std::size_t>(f)];
      if (v == 0) continue;
      if (v > INT64_MAX || v < INT64_MIN) throw GuardError("relative cycle coefficient exceeds 64 bits");
      span.add(f, col, static_cast<std::int64_t>(v));
    }
  }
  const int base = span.cols();
  for (int c = 0; c < rel.d[3].cols(); ++c) span.add_col();
  for (int r = 0; r < rel.d[3].rows(); ++r)
    for (auto [c, v] : rel.d[3].row(r)) span.add(r, base + c, v);
  const auto factors = invariant_factors(span);
  s.span_rank = static_cast<int>(factors.size());
  s.saturated = std::all_of(factors.begin(), factors.end(), [](const BigInt& f) { return f == 1; });
  return s;
}

TNBound tn_upper_bound(const std::vector<PatternedManifold>& pieces,
                       const std::vector<std::vector<RelativeCycle>>& candidates, const RelSelector& rel) {
  if (pieces.size() != candidates.size()) throw DomainError("one candidate list is needed per piece");
  TNBound out;
  out.generating = true;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto q = pieces[i].quotient();
    const auto rc = relative_complex(pieces[i], q, rel);
    const auto& cycles = candidates[i];
    if (!span_check(rc.chains, cycles).generates()) {
      out.generating = false;
      out.per_piece.push_back(-1);
      out.failures.push_back("piece " + std::to_string(i) + ": not-a-generating-set");
      continue;
    }
    std::set<int> thresholds{0};
    for (const auto& c : cycles) thresholds.insert(c.chi_minus);
    for (int tau : thresholds) {
      std::vector<RelativeCycle> subset;
      std::vector<int> values;
      for (const auto& c : cycles)
        if (c.chi_minus <= tau) {
          subset.push_back(c);
          values.push_back(c.chi_minus);
        }
      if (span_check(rc.chains, subset).generates()) {
        out.per_piece.push_back(tn_of_set(values));
        break;
      }
    }
  }
  if (out.generating) out.bound = tn_of_set(out.per_piece);
  return out;
}

std::vector<RelativeCycle> kernel_cycles(const PatternedManifold& p, const RelSelector& rel) {
  const auto q = p.quotient();
  const auto rc = relative_complex(p, q, rel);
  std::vector<int> absolute(static_cast<std::size_t>(rc.chains.dims[2]), -1);
  for (std::size_t f = 0; f < rc.face_index.size(); ++f)
    if (rc.face_index[f] >= 0) absolute[static_cast<std::size_t>(rc.face_index[f])] = static_cast<int>(f);
  std::vector<RelativeCycle> out;
  for (auto& k : integer_kernel(rc.chains.d[2])) {
    RelativeCycle c;
    std::vector<int> support;
    BigInt top = 0;
    for (std::size_t f = 0; f < k.size(); ++f)
      if (k[f] != 0) {
        support.push_back(absolute[f]);
        top = std::max(top, BigInt(abs(k[f])));
      }
    if (top > 1000000) throw GuardError("relative cycle coefficient too large for a chi_- estimate");
    c.chi_minus = chi_minus(component_chis(q, support)) * static_cast<int>(top);
    c.coefficients = std::move(k);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

int boundary_euler(const PatternedManifold& p) {
  int chi = 0;
  for (const auto& c : p.boundary()) chi += c.euler_char;
  return chi;
}

struct CarvePlan {
  SeparatingCarve carve;
  std::vector<int> annuli;        // annulus ids, one per base circle
  std::vector<AnnulusWalk> walks;  // guts-side quads, in the shared complex
};

// Walks an annulus on its I-bundle side, where it is always a strip of
// vertical quads, and carries the walk across the frontier gluings to the
// guts side, whose own quotient may not see the annulus as embedded.
AnnulusWalk guts_side_walk(const GIDecomposition& d, int id, int ib) {
  const auto& a = d.annulus(id);
  const auto& side = a.sides[a.sides[0].node == ib ? 0 : 1];
  const auto piece = node_piece(d, ib);
  const auto& src = piece.source_cells;
  std::vector<FaceRef> faces;
  for (const auto& f : side.faces)
    faces.push_back({static_cast<int>(std::lower_bound(src.begin(), src.end(), f.cell) - src.begin()), f.face});
  const auto walk = walk_annulus(piece.quotient(), faces);
  AnnulusWalk out;
  for (std::size_t k = 0; k < walk.quads.size(); ++k) {
    const FaceRef global{src[static_cast<std::size_t>(walk.quads[k].cell)], walk.quads[k].face};
    const int g = d.complex.gluing_at(global);
    if (g < 0) throw InternalError("annulus face without a frontier gluing");
    const auto [other, map] = d.complex.across(g, global);
    out.quads.push_back(other);
    std::array<int, 4> pos{};
    for (int r = 0; r < 4; ++r) pos[static_cast<std::size_t>(r)] = map[static_cast<std::size_t>(walk.pos[k][static_cast<std::size_t>(r)])];
    out.pos.push_back(pos);
  }
  return out;
}


// The attaching circles on the guts side must be embedded: m distinct
// corners on each of the two circles of every walk, none shared between
// circles meeting the same guts node. Returns the failure, or "".
std::string guts_circles_embedded(const GIDecomposition& d, const std::vector<AnnulusWalk>& walks,
                                  const std::vector<int>& guts_nodes) {
  std::map<int, std::set<int>> used;  // guts node -> corner classes
  for (std::size_t w = 0; w < walks.size(); ++w) {
    const int g = guts_nodes[w];
    const auto piece = node_piece(d, g);
    const auto q = piece.quotient();
    const auto& src = piece.source_cells;
    const std::size_t m = walks[w].quads.size();
    std::vector<std::array<int, 4>> corner(m);
    for (std::size_t k = 0; k < m; ++k) {
      const FaceRef f = walks[w].quads[k];
      const int cell = static_cast<int>(std::lower_bound(src.begin(), src.end(), f.cell) - src.begin());
      const auto& verts = piece.complex.cell(cell).faces[static_cast<std::size_t>(f.face)].verts;
      for (std::size_t r = 0; r < 4; ++r)
        corner[k][r] = q.vertex_of(cell, verts[static_cast<std::size_t>(walks[w].pos[k][r])]);
    }
    // Consecutive quads must already share their vertical edge in the guts
    // piece; otherwise the prism would glue the guts along it.
    for (std::size_t k = 0; k < m; ++k) {
      const auto& a = corner[k];
      const auto& b = corner[(k + 1) % m];
      if (a[1] != b[0] || a[2] != b[3]) return "annulus is cut open on the guts side";
    }
    std::array<std::set<int>, 2> circle;
    for (const auto& c : corner) {
      circle[0].insert(c[0]);
      circle[1].insert(c[3]);
    }
    if (circle[0].size() != m || circle[1].size() != m) return "attaching circle is not embedded on the guts side";
    auto& seen = used[g];
    for (const auto& c : circle)
      for (int v : c)
        if (!seen.insert(v).second) return "attaching circles meet on the guts side";
  }
  return {};
}
}  // namespace

SeparatingRefinement refine_separating(const GIDecomposition& d) {
  if (d.stage != Stage::BallPlugged) throw DomainError("separating refinement needs a ball-plugged decomposition");
  SeparatingRefinement out;
  const int nn = static_cast<int>(d.nodes.size());
  UnionFind uf(static_cast<std::size_t>(nn));
  std::vector<CarvePlan> plans;

  for (int n = 0; n < nn; ++n) {
    if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) continue;
    const auto desc = describe_ibundle(d, n);
    CarvePlan plan;
    auto& c = plan.carve;
    c.ibundle = n;
    c.chi_f = desc.base_euler;
    c.circles = desc.base_boundary_circles;
    c.chi_q = 1 - c.circles;
    c.chi_base_prime = c.chi_f - c.chi_q;
    const auto skip = [&](std::string why) {
      c.skipped = true;
      c.reason = std::move(why);
    };
    std::vector<int> guts_nodes;
    for (const auto& a : d.annuli) {
      const bool s0 = a.sides[0].node == n, s1 = a.sides[1].node == n;
      if (!s0 && !s1) continue;
      if (s0 && s1) {
        skip("annulus " + std::to_string(a.id) + " has the I-bundle on both sides");
        break;
      }
      const auto& other = a.sides[s0 ? 1 : 0];
      if (!guts_family(d.nodes[static_cast<std::size_t>(other.node)].kind)) {
        skip("annulus " + std::to_string(a.id) + " faces another I-bundle");
        break;
      }
      plan.annuli.push_back(a.id);
      guts_nodes.push_back(other.node);
    }
    if (!c.skipped && c.circles == 0) skip("closed base");
    if (!c.skipped && static_cast<int>(plan.annuli.size()) != c.circles)
      skip(std::to_string(plan.annuli.size()) + " annuli for " + std::to_string(c.circles) + " base circles");
    if (!c.skipped)
      for (int id : plan.annuli) {
        try {
          plan.walks.push_back(guts_side_walk(d, id, n));
        } catch (const DomainError& e) {
          skip("annulus " + std::to_string(id) + ": " + e.what());
          break;
        }
      }
    if (!c.skipped)
      if (auto why = guts_circles_embedded(d, plan.walks, guts_nodes); !why.empty()) skip(std::move(why));
    if (!c.skipped)
      for (std::size_t i = 1; i < guts_nodes.size(); ++i)
        uf.unite(static_cast<std::size_t>(guts_nodes[0]), static_cast<std::size_t>(guts_nodes[i]));
    plans.push_back(std::move(plan));
  }

  // Guts classes, in order of their smallest node.
  std::map<std::size_t, std::vector<int>> classes;
  for (int n = 0; n < nn; ++n)
    if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) {
      classes[uf.find(static_cast<std::size_t>(n))].push_back(n);
      out.boundary_euler_before += boundary_euler(node_piece(d, n));
    }
  for (const auto& plan : plans)
    if (!plan.carve.skipped) out.boundary_euler_before += 2 * plan.carve.chi_f;

  for (const auto& [root, members] : classes) {
    std::vector<int> cells, annuli;
    bool any_guts = false, capped = false;
    for (int n : members) {
      const auto& node = d.nodes[static_cast<std::size_t>(n)];
      cells.insert(cells.end(), node.cells.begin(), node.cells.end());
      any_guts = any_guts || node.kind == NodeKind::Guts;
      capped = capped || node.sv_capped;
    }
    for (const auto& a : d.annuli)
      for (const auto& s : a.sides)
        if (std::find(members.begin(), members.end(), s.node) != members.end()) {
          annuli.push_back(a.id);
          break;
        }
    PatternedManifold p = extract(d, cells, annuli, any_guts ? NodeKind::Guts : NodeKind::PseudoGuts, capped);
    const int index = static_cast<int>(out.guts_prime.size());
    const auto local_face = [&](FaceRef f) -> FaceRef {
      const auto& src = p.source_cells;
      return {static_cast<int>(std::lower_bound(src.begin(), src.end(), f.cell) - src.begin()), f.face};
    };
    std::set<int> dropped;
    std::vector<std::pair<std::size_t, int>> added;  // plan, prism cell
    for (std::size_t i = 0; i < plans.size(); ++i) {
      auto& plan = plans[i];
      if (plan.carve.skipped) continue;
      const auto& first = d.annulus(plan.annuli.front());
      const int gnode = first.sides[first.sides[0].node == plan.carve.ibundle ? 1 : 0].node;
      if (uf.find(static_cast<std::size_t>(gnode)) != root) continue;
      std::vector<AnnulusWalk> walks;
      std::vector<int> lengths;
      for (std::size_t w = 0; w < plan.annuli.size(); ++w) {
        AnnulusWalk local = plan.walks[w];
        for (auto& f : local.quads) f = local_face(f);
        dropped.insert(p.pattern.at(local.quads.front()));
        lengths.push_back(static_cast<int>(local.quads.size()));
        walks.push_back(std::move(local));
      }
      const int cell = attach_polygon_prism(p.complex, planar_sides(lengths), walks);
      p.cell_tag.push_back(kTagSurfaceProduct);
      plan.carve.piece = index;
      added.emplace_back(i, cell);
    }
    // Relabel: surviving old labels first, then one new annulus per carve.
    std::map<int, int> relabel;
    for (int l = 0; l < p.annulus_count; ++l)
      if (!dropped.count(l)) relabel.emplace(l, static_cast<int>(relabel.size()));
    std::map<FaceRef, int> pattern;
    for (const auto& [f, l] : p.pattern)
      if (!dropped.count(l)) pattern[f] = relabel.at(l);
    int next = static_cast<int>(relabel.size());
    std::vector<int> fresh;
    for (const auto& [plan, cell] : added) {
      for (int f = 2; f < 5; ++f) pattern[{cell, f}] = next;
      fresh.push_back(next++);
    }
    p.pattern = std::move(pattern);
    p.annulus_count = next;
    if (!added.empty()) {
      const auto q2 = p.quotient();
      for (const auto& [plan, cell] : added)
        plans[plan].carve.chi_q_cells = surface_euler_char(q2, {q2.face_of({cell, 0}).first});
    }
    out.boundary_euler_after += boundary_euler(p);
    out.guts_prime.push_back(std::move(p));
    out.annuli_prime.push_back(std::move(fresh));
  }
  for (auto& plan : plans) {
    if (!plan.carve.skipped) out.boundary_euler_after += 2 * plan.carve.chi_base_prime;
    out.carves.push_back(std::move(plan.carve));
  }
  return out;
}

}  // namespace gutscat
