#include "gutscat/capping.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gutscat/error.hpp"
#include "gutscat/gi_decomposition.hpp"

namespace gutscat {

AnnulusWalk AnnulusWalk::reversed() const {
  AnnulusWalk out;
  for (std::size_t k = quads.size(); k-- > 0;) {
    out.quads.push_back(quads[k]);
    const auto& p = pos[k];
    out.pos.push_back({p[1], p[0], p[3], p[2]});
  }
  return out;
}

AnnulusWalk walk_annulus(const CellQuotient& q, std::vector<FaceRef> faces) {
  std::sort(faces.begin(), faces.end());
  const auto& pc = q.poly();
  const auto verts = [&](FaceRef f) -> const std::vector<int>& {
    return pc.cell(f.cell).faces[static_cast<std::size_t>(f.face)].verts;
  };
  std::map<int, int> uses;
  for (const auto& f : faces) {
    const auto& vs = verts(f);
    if (vs.size() != 4) throw DomainError("pattern annulus face is not a quadrilateral");
    for (std::size_t k = 0; k < 4; ++k) ++uses[q.edge_of(f.cell, vs[k], vs[(k + 1) % 4]).first];
  }
  const auto vertical = [&](FaceRef f, int k) {
    const auto& vs = verts(f);
    return uses.at(q.edge_of(f.cell, vs[static_cast<std::size_t>(k % 4)], vs[static_cast<std::size_t>((k + 1) % 4)]).first) == 2;
  };
  // A reading r_i = verts[(s + dir*i) mod 4] enters across r_0 r_1 (top to
  // bottom) and leaves across r_2 r_3.
  struct Reading {
    int s, dir;
    int at(int i) const { return ((s + dir * i) % 4 + 4) % 4; }
  };
  const FaceRef first = faces.front();
  int s0 = -1;
  for (int k = 0; k < 4 && s0 < 0; ++k)
    if (vertical(first, k) && vertical(first, k + 2) && !vertical(first, k + 1)) s0 = k;
  if (s0 < 0) throw DomainError("pattern quad without two vertical sides");
  AnnulusWalk walk;
  std::set<FaceRef> seen;
  FaceRef cur = first;
  Reading r{s0, 1};
  while (true) {
    if (!seen.insert(cur).second) throw DomainError("annulus walk revisits a quad");
    walk.quads.push_back(cur);
    walk.pos.push_back({r.at(1), r.at(2), r.at(3), r.at(0)});
    const auto& vs = verts(cur);
    const auto exit = q.edge_of(cur.cell, vs[static_cast<std::size_t>(r.at(2))], vs[static_cast<std::size_t>(r.at(3))]);
    bool found = false;
    for (const auto& f : faces) {
      const auto& ws = verts(f);
      for (int p = 0; p < 4 && !found; ++p)
        for (int dir : {1, -1}) {
          const Reading cand{p, dir};
          if (f == cur && cand.s == r.at(3) && cand.dir == -r.dir) continue;  // back the way we came
          const auto e = q.edge_of(f.cell, ws[static_cast<std::size_t>(cand.at(1))], ws[static_cast<std::size_t>(cand.at(0))]);
          if (e != exit) continue;
          // the side r_1 r_2 must be horizontal
          const int a = cand.at(1), b = cand.at(2);
          if (uses.at(q.edge_of(f.cell, ws[static_cast<std::size_t>(a)], ws[static_cast<std::size_t>(b)]).first) != 1) continue;
          cur = f;
          r = cand;
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) throw DomainError("annulus walk breaks off");
    if (cur == first) {
      if (r.s != s0 || r.dir != 1) throw DomainError("annulus walk closes with a twist");
      break;
    }
  }
  if (walk.quads.size() != faces.size()) throw DomainError("pattern faces do not form a single annulus");
  return walk;
}

int attach_polygon_prism(PolyComplex& pc, const std::vector<PolygonSide>& sides, std::vector<AnnulusWalk> walks,
                         GlueKind attach) {
  const int L = static_cast<int>(sides.size());
  if (L < 3) throw DomainError("polygon needs at least three sides");
  PolyCell cell;
  cell.vertex_count = 2 * L;
  PolyFace bottom, top;
  bottom.cls = top.cls = FaceClass::Horizontal;
  for (int i = L - 1; i >= 0; --i) bottom.verts.push_back(i);
  for (int i = 0; i < L; ++i) top.verts.push_back(L + i);
  cell.faces.push_back(bottom);
  cell.faces.push_back(top);
  for (int i = 0; i < L; ++i) {
    const int j = (i + 1) % L;
    cell.faces.push_back({{i, j, L + j, L + i}, FaceClass::VerticalQuad});
  }
  const int id = pc.add_cell(std::move(cell));

  std::map<int, std::vector<int>> folds;
  for (int i = 0; i < L; ++i)
    if (sides[static_cast<std::size_t>(i)].fold >= 0) folds[sides[static_cast<std::size_t>(i)].fold].push_back(i);
  for (const auto& [f, at] : folds) {
    if (at.size() != 2 || sides[static_cast<std::size_t>(at[0])].inverse == sides[static_cast<std::size_t>(at[1])].inverse)
      throw DomainError("fold letters must come as a and a^-1");
    pc.add_gluing({{id, 2 + at[0]}, {id, 2 + at[1]}, {1, 0, 3, 2}, GlueKind::Fold});
  }

  std::vector<std::vector<int>> by_walk(walks.size());
  for (int i = 0; i < L; ++i) {
    const auto& s = sides[static_cast<std::size_t>(i)];
    if (s.fold >= 0 || s.free) continue;
    if (s.annulus < 0 || s.annulus >= static_cast<int>(walks.size())) throw DomainError("polygon side without a target");
    by_walk[static_cast<std::size_t>(s.annulus)].push_back(i);
  }
  for (std::size_t w = 0; w < walks.size(); ++w) {
    auto& walk = walks[w];
    const auto& at = by_walk[w];
    if (at.size() != walk.quads.size()) throw DomainError("polygon sides do not match the annulus length");
    const auto gluing_for = [&](const AnnulusWalk& wk, std::size_t k) {
      const int i = at[k];
      const int idx = sides[static_cast<std::size_t>(i)].index;
      const auto& p = wk.pos[static_cast<std::size_t>(idx)];
      return PolyGluing{{id, 2 + i}, wk.quads[static_cast<std::size_t>(idx)], {p[0], p[1], p[2], p[3]}, attach};
    };
    if (!gluing_for(walk, 0).reverses()) walk = walk.reversed();
    for (std::size_t k = 0; k < at.size(); ++k) {
      auto g = gluing_for(walk, k);
      if (!g.reverses()) throw InternalError("attaching map keeps orientation");
      pc.add_gluing(std::move(g));
    }
  }
  return id;
}

std::vector<PolygonSide> punctured_torus_sides(int m) {
  std::vector<PolygonSide> out;
  for (int k = 0; k < m; ++k) out.push_back({-1, false, 0, k, false});
  out.push_back({0, false, -1, 0, false});
  out.push_back({1, false, -1, 0, false});
  out.push_back({0, true, -1, 0, false});
  out.push_back({1, true, -1, 0, false});
  return out;
}

std::vector<PolygonSide> planar_sides(const std::vector<int>& walk_lengths) {
  std::vector<PolygonSide> out(3, PolygonSide{-1, false, -1, 0, true});  // N_1 N_2 N_3
  for (std::size_t w = 0; w < walk_lengths.size(); ++w) {
    out.push_back({static_cast<int>(w), false, -1, 0, false});
    for (int k = 0; k < walk_lengths[w]; ++k) out.push_back({-1, false, static_cast<int>(w), k, false});
    out.push_back({static_cast<int>(w), true, -1, 0, false});
  }
  return out;
}

std::vector<PatternedManifold> cap_with_punctured_torus(const GIDecomposition& d) {
  std::vector<PatternedManifold> out;
  for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n) {
    if (!guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) continue;
    PatternedManifold p = node_piece(d, n);
    const auto q = p.quotient();
    std::vector<std::vector<FaceRef>> by_label(static_cast<std::size_t>(p.annulus_count));
    for (const auto& [f, label] : p.pattern) by_label[static_cast<std::size_t>(label)].push_back(f);
    std::vector<AnnulusWalk> walks;
    for (const auto& faces : by_label) walks.push_back(walk_annulus(q, faces));
    for (const auto& w : walks) {
      attach_polygon_prism(p.complex, punctured_torus_sides(static_cast<int>(w.quads.size())), {w});
      p.cell_tag.push_back(kTagSurfaceProduct);
    }
    p.pattern.clear();
    p.annulus_count = 0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace gutscat
