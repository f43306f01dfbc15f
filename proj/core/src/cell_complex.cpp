#include "gutscat/cell_complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gutscat/error.hpp"
#include "union_find.hpp"

namespace gutscat {

using detail::ParityUF;
using detail::UnionFind;

const char* to_string(FaceClass c) {
  switch (c) {
    case FaceClass::DiscS: return "disc-S";
    case FaceClass::DiscSv: return "disc-Sv";
    case FaceClass::Hexagonal: return "hexagonal";
    case FaceClass::QuadFace: return "quad-face";
    case FaceClass::VerticalQuad: return "vertical-quad";
    case FaceClass::Horizontal: return "horizontal";
  }
  return "?";
}

const char* to_string(GlueKind k) {
  switch (k) {
    case GlueKind::Hexagonal: return "hexagonal";
    case GlueKind::QuadQuad: return "quad-quad";
    case GlueKind::Vertical: return "vertical";
    case GlueKind::Frontier: return "frontier";
    case GlueKind::Attach: return "attach";
    case GlueKind::Fold: return "fold";
  }
  return "?";
}

bool PolyGluing::reverses() const {
  const int n = static_cast<int>(map.size());
  if (n < 2) return false;
  return map[1] != (map[0] + 1) % n;
}

int PolyComplex::add_cell(PolyCell cell) {
  for (const auto& f : cell.faces) {
    if (f.verts.size() < 2) throw InternalError("degenerate face");
    for (int v : f.verts)
      if (v < 0 || v >= cell.vertex_count) throw InternalError("face vertex out of range");
  }
  // Coherently oriented closed surface: every directed edge exactly once,
  // together with its reverse.
  std::set<std::pair<int, int>> directed;
  for (const auto& f : cell.faces)
    for (std::size_t k = 0; k < f.verts.size(); ++k)
      if (!directed.emplace(f.verts[k], f.verts[(k + 1) % f.verts.size()]).second)
        throw InternalError("cell faces are not coherently oriented");
  for (const auto& [u, v] : directed)
    if (!directed.count({v, u})) throw InternalError("cell boundary is not closed");
  cells_.push_back(std::move(cell));
  return static_cast<int>(cells_.size()) - 1;
}

int PolyComplex::add_gluing(PolyGluing g) {
  const auto& fa = cell(g.a.cell).faces[static_cast<std::size_t>(g.a.face)];
  const auto& fb = cell(g.b.cell).faces[static_cast<std::size_t>(g.b.face)];
  if (fa.verts.size() != fb.verts.size() || g.map.size() != fa.verts.size())
    throw InternalError("gluing between faces of different sizes");
  if (g.a == g.b) throw InternalError("face glued to itself");
  if (at_.count(g.a) || at_.count(g.b)) throw InternalError("face glued twice");
  const int n = static_cast<int>(g.map.size());
  const int step = (g.map[1 % n] - g.map[0] + n) % n;
  for (int i = 0; i < n; ++i)
    if ((g.map[static_cast<std::size_t>((i + 1) % n)] - g.map[static_cast<std::size_t>(i)] + n) % n != step ||
        (step != 1 && step != n - 1))
      throw InternalError("gluing map is not a dihedral map of the face cycle");
  const int id = static_cast<int>(gluings_.size());
  at_[g.a] = id;
  at_[g.b] = id;
  gluings_.push_back(std::move(g));
  return id;
}

int PolyComplex::gluing_at(FaceRef f) const {
  const auto it = at_.find(f);
  return it == at_.end() ? -1 : it->second;
}

std::pair<FaceRef, std::vector<int>> PolyComplex::across(int g, FaceRef f) const {
  const auto& gl = gluing(g);
  if (gl.a == f) return {gl.b, gl.map};
  if (gl.b != f) throw InternalError("face is not part of the gluing");
  std::vector<int> inv(gl.map.size());
  for (std::size_t i = 0; i < gl.map.size(); ++i) inv[static_cast<std::size_t>(gl.map[i])] = static_cast<int>(i);
  return {gl.a, inv};
}

namespace {

std::vector<int> dense_ids(UnionFind& uf, std::size_t n, int& count) {
  std::vector<int> id(n, -1), out(n);
  count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (id[r] < 0) id[r] = count++;
    out[i] = id[r];
  }
  return out;
}

}  // namespace

CellQuotient::CellQuotient(const PolyComplex& pc, QuotientSpec spec) : pc_(&pc), spec_(std::move(spec)) {
  const auto& sel = spec_.cells;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    if (!local_.emplace(sel[i], static_cast<int>(i)).second) throw InternalError("cell selected twice");
  }
  // Local numbering of vertices, edges and faces.
  int nv = 0, ne = 0, nf = 0;
  local_edges_.resize(sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i) {
    const auto& c = pc.cell(sel[i]);
    vert_off_.push_back(nv);
    edge_off_.push_back(ne);
    face_off_.push_back(nf);
    nv += c.vertex_count;
    auto& le = local_edges_[i];
    for (const auto& f : c.faces) {
      const std::size_t n = f.verts.size();
      for (std::size_t k = 0; k < n; ++k) {
        int u = f.verts[k], v = f.verts[(k + 1) % n];
        if (u > v) std::swap(u, v);
        if (u == v) throw InternalError("face with a repeated consecutive vertex");
        le.emplace(std::make_pair(u, v), static_cast<int>(le.size()));
      }
    }
    ne += static_cast<int>(le.size());
    nf += static_cast<int>(c.faces.size());
  }
  vert_off_.push_back(nv);
  edge_off_.push_back(ne);
  face_off_.push_back(nf);

  UnionFind vuf(static_cast<std::size_t>(nv)), fuf(static_cast<std::size_t>(nf));
  ParityUF euf(static_cast<std::size_t>(ne));
  std::vector<int> fsign_raw(static_cast<std::size_t>(nf), 1);

  const auto local_edge = [&](int li, int u, int v) {
    const int a = std::min(u, v), b = std::max(u, v);
    return edge_off_[static_cast<std::size_t>(li)] + local_edges_[static_cast<std::size_t>(li)].at({a, b});
  };

  for (const auto& g : pc.gluings()) {
    const auto ia = local_.find(g.a.cell), ib = local_.find(g.b.cell);
    if (ia == local_.end() || ib == local_.end()) continue;
    if (spec_.use_gluing && !spec_.use_gluing(g)) continue;
    const auto& fa = pc.cell(g.a.cell).faces[static_cast<std::size_t>(g.a.face)].verts;
    const auto& fb = pc.cell(g.b.cell).faces[static_cast<std::size_t>(g.b.face)].verts;
    const std::size_t n = fa.size();
    for (std::size_t k = 0; k < n; ++k) {
      const int ua = fa[k], va = fa[(k + 1) % n];
      const int ub = fb[static_cast<std::size_t>(g.map[k])], vb = fb[static_cast<std::size_t>(g.map[(k + 1) % n])];
      vuf.unite(static_cast<std::size_t>(vert_off_[static_cast<std::size_t>(ia->second)] + ua),
                static_cast<std::size_t>(vert_off_[static_cast<std::size_t>(ib->second)] + ub));
      const int rel = (ua < va ? 0 : 1) ^ (ub < vb ? 0 : 1);
      if (!euf.unite(static_cast<std::size_t>(local_edge(ia->second, ua, va)),
                     static_cast<std::size_t>(local_edge(ib->second, ub, vb)), rel))
        throw InternalError("edge identified with its own reverse");
    }
    const int faid = face_off_[static_cast<std::size_t>(ia->second)] + g.a.face;
    const int fbid = face_off_[static_cast<std::size_t>(ib->second)] + g.b.face;
    fuf.unite(static_cast<std::size_t>(faid), static_cast<std::size_t>(fbid));
    // The larger id takes its sign against the smaller one's cycle.
    fsign_raw[static_cast<std::size_t>(std::max(faid, fbid))] = g.reverses() ? -1 : 1;
  }

  int n0 = 0, n1 = 0, n2 = 0;
  vclass_ = dense_ids(vuf, static_cast<std::size_t>(nv), n0);
  {
    std::vector<int> id(static_cast<std::size_t>(ne), -1);
    eclass_.resize(static_cast<std::size_t>(ne));
    eparity_.resize(static_cast<std::size_t>(ne));
    for (int i = 0; i < ne; ++i) {
      auto [r, p] = euf.find(static_cast<std::size_t>(i));
      if (id[r] < 0) id[r] = n1++;
      eclass_[static_cast<std::size_t>(i)] = id[r];
      eparity_[static_cast<std::size_t>(i)] = p;
    }
  }
  fclass_ = dense_ids(fuf, static_cast<std::size_t>(nf), n2);
  fsign_ = fsign_raw;
  refs_.assign(static_cast<std::size_t>(n2), {});
  std::vector<int> rep_face(static_cast<std::size_t>(n2), -1);
  std::vector<int> rep_cell(static_cast<std::size_t>(n2), -1);
  for (std::size_t li = 0; li < sel.size(); ++li) {
    const auto& c = pc.cell(sel[li]);
    for (int f = 0; f < static_cast<int>(c.faces.size()); ++f) {
      const int id = fclass_[static_cast<std::size_t>(face_off_[li] + f)];
      refs_[static_cast<std::size_t>(id)].push_back({sel[li], f});
      if (rep_face[static_cast<std::size_t>(id)] < 0) {
        rep_face[static_cast<std::size_t>(id)] = f;
        rep_cell[static_cast<std::size_t>(id)] = static_cast<int>(li);
      }
    }
  }

  const int n3 = static_cast<int>(sel.size()) + static_cast<int>(spec_.caps.size());
  chains_.dims = {n0, n1, n2, n3};
  chains_.d[1] = SparseMatrix(n0, n1);
  chains_.d[2] = SparseMatrix(n1, n2);
  chains_.d[3] = SparseMatrix(n2, n3);
  chains_.d[0] = SparseMatrix(0, n0);
  chains_.occ[1].assign(static_cast<std::size_t>(n1), {});
  chains_.occ[2].assign(static_cast<std::size_t>(n2), {});
  chains_.occ[3].assign(static_cast<std::size_t>(n3), {});
  chains_.occ[0].assign(static_cast<std::size_t>(n0), {});

  // d1 from each edge class's representative.
  std::vector<char> edge_done(static_cast<std::size_t>(n1), 0);
  for (std::size_t li = 0; li < sel.size(); ++li)
    for (const auto& [uv, k] : local_edges_[li]) {
      const int le = edge_off_[li] + k;
      const int e = eclass_[static_cast<std::size_t>(le)];
      if (edge_done[static_cast<std::size_t>(e)]) continue;
      edge_done[static_cast<std::size_t>(e)] = 1;
      // Class orientation = local u->v (u<v) flipped by the parity.
      int tail = vclass_[static_cast<std::size_t>(vert_off_[li] + uv.first)];
      int head = vclass_[static_cast<std::size_t>(vert_off_[li] + uv.second)];
      if (eparity_[static_cast<std::size_t>(le)]) std::swap(tail, head);
      chains_.d[1].add(head, e, 1);
      chains_.d[1].add(tail, e, -1);
      chains_.occ[1][static_cast<std::size_t>(e)] = {tail, head};
    }
  // d2 from each 2-cell's representative cycle.
  for (int id = 0; id < n2; ++id) {
    const int li = rep_cell[static_cast<std::size_t>(id)];
    const auto& verts = pc.cell(sel[static_cast<std::size_t>(li)]).faces[static_cast<std::size_t>(rep_face[static_cast<std::size_t>(id)])].verts;
    const std::size_t n = verts.size();
    for (std::size_t k = 0; k < n; ++k) {
      auto [e, s] = edge_of(sel[static_cast<std::size_t>(li)], verts[k], verts[(k + 1) % n]);
      chains_.d[2].add(e, id, s);
      chains_.occ[2][static_cast<std::size_t>(id)].push_back(e);
    }
  }
  // d3: the cells themselves, then the caps.
  for (std::size_t li = 0; li < sel.size(); ++li) {
    const auto& c = pc.cell(sel[li]);
    for (int f = 0; f < static_cast<int>(c.faces.size()); ++f) {
      auto [id, s] = face_of({sel[li], f});
      chains_.d[3].add(id, static_cast<int>(li), s);
      chains_.occ[3][li].push_back(id);
    }
  }
  std::vector<int> face_uses(static_cast<std::size_t>(n2), 0);
  for (const auto& o : chains_.occ[3])
    for (int id : o) ++face_uses[static_cast<std::size_t>(id)];
  for (std::size_t k = 0; k < spec_.caps.size(); ++k) {
    const int cap = static_cast<int>(sel.size() + k);
    for (const auto& fr : spec_.caps[k]) {
      auto [id, s] = face_of(fr);
      if (face_uses[static_cast<std::size_t>(id)] != 1) throw InternalError("cap on a face that is not on the boundary");
      ++face_uses[static_cast<std::size_t>(id)];
      chains_.d[3].add(id, cap, -s);
      chains_.occ[3][static_cast<std::size_t>(cap)].push_back(id);
    }
  }
}

int CellQuotient::vertex_of(int cell, int v) const {
  const int li = local_.at(cell);
  return vclass_[static_cast<std::size_t>(vert_off_[static_cast<std::size_t>(li)] + v)];
}

std::pair<int, int> CellQuotient::edge_of(int cell, int u, int v) const {
  const int li = local_.at(cell);
  const int a = std::min(u, v), b = std::max(u, v);
  const int le = edge_off_[static_cast<std::size_t>(li)] + local_edges_[static_cast<std::size_t>(li)].at({a, b});
  int s = eparity_[static_cast<std::size_t>(le)] ? -1 : 1;
  if (u > v) s = -s;
  return {eclass_[static_cast<std::size_t>(le)], s};
}

std::pair<int, int> CellQuotient::face_of(FaceRef f) const {
  const int li = local_.at(f.cell);
  const int raw = face_off_[static_cast<std::size_t>(li)] + f.face;
  const int id = fclass_[static_cast<std::size_t>(raw)];
  // The class representative is the first reference; a second reference
  // carries the sign of its gluing.
  const auto& refs = refs_[static_cast<std::size_t>(id)];
  if (refs.size() < 2 || refs.front() == f) return {id, 1};
  const int other_raw = face_off_[static_cast<std::size_t>(local_.at(refs.front().cell))] + refs.front().face;
  // fsign_ was stored on the larger raw id relative to the smaller one.
  int s = fsign_[static_cast<std::size_t>(std::max(raw, other_raw))];
  return {id, s};
}

std::vector<int> CellQuotient::boundary_faces() const {
  std::vector<int> uses(static_cast<std::size_t>(chains_.dims[2]), 0);
  for (const auto& o : chains_.occ[3])
    for (int id : o) ++uses[static_cast<std::size_t>(id)];
  std::vector<int> out;
  for (int i = 0; i < chains_.dims[2]; ++i)
    if (uses[static_cast<std::size_t>(i)] == 1) out.push_back(i);
  return out;
}

HomologyGroup ChainComplex::homology(int k) const {
  if (k < 0 || k > 3) return {};
  const SparseMatrix empty_in(dims[static_cast<std::size_t>(k)], 0);
  const SparseMatrix& dk = k == 0 ? SparseMatrix() : d[static_cast<std::size_t>(k)];
  const SparseMatrix& dk1 = k == 3 ? empty_in : d[static_cast<std::size_t>(k + 1)];
  return homology_at(dims[static_cast<std::size_t>(k)], dk, dk1);
}

HomologyGroup ChainComplex::h1_with_discs(const std::vector<std::map<int, std::int64_t>>& cycles) const {
  SparseMatrix d2 = d[2];
  for (const auto& cyc : cycles) {
    const int col = d2.add_col();
    for (auto [e, c] : cyc) d2.add(e, col, c);
  }
  return homology_at(dims[1], d[1], d2);
}

ChainComplex ChainComplex::relative_to(const std::vector<int>& two_cells, std::array<std::vector<int>, 4>* index) const {
  std::array<std::vector<char>, 4> gone;
  for (int k = 0; k < 4; ++k) gone[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]), 0);
  for (int f : two_cells) {
    if (f < 0 || f >= dims[2]) throw DomainError("relative selector names a non-existent boundary face");
    gone[2][static_cast<std::size_t>(f)] = 1;
    for (int e : occ[2][static_cast<std::size_t>(f)]) {
      gone[1][static_cast<std::size_t>(e)] = 1;
      for (int v : occ[1][static_cast<std::size_t>(e)]) gone[0][static_cast<std::size_t>(v)] = 1;
    }
  }
  std::array<std::vector<int>, 4> idx;
  ChainComplex out;
  for (int k = 0; k < 4; ++k) {
    auto& ix = idx[static_cast<std::size_t>(k)];
    ix.assign(static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]), -1);
    int n = 0;
    for (int i = 0; i < dims[static_cast<std::size_t>(k)]; ++i)
      if (!gone[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) ix[static_cast<std::size_t>(i)] = n++;
    out.dims[static_cast<std::size_t>(k)] = n;
  }
  out.d[0] = SparseMatrix(0, out.dims[0]);
  for (int k = 1; k < 4; ++k) {
    auto& m = out.d[static_cast<std::size_t>(k)];
    m = SparseMatrix(out.dims[static_cast<std::size_t>(k - 1)], out.dims[static_cast<std::size_t>(k)]);
    for (int r = 0; r < d[static_cast<std::size_t>(k)].rows(); ++r) {
      const int nr = idx[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(r)];
      if (nr < 0) continue;
      for (auto [c, v] : d[static_cast<std::size_t>(k)].row(r)) {
        const int nc = idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
        if (nc >= 0) m.add(nr, nc, v);
      }
    }
    auto& o = out.occ[static_cast<std::size_t>(k)];
    o.assign(static_cast<std::size_t>(out.dims[static_cast<std::size_t>(k)]), {});
    for (int i = 0; i < dims[static_cast<std::size_t>(k)]; ++i) {
      const int ni = idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (ni < 0) continue;
      for (int f : occ[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) {
        const int nf = idx[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(f)];
        if (nf >= 0) o[static_cast<std::size_t>(ni)].push_back(nf);
      }
    }
  }
  out.occ[0].assign(static_cast<std::size_t>(out.dims[0]), {});
  if (index) *index = std::move(idx);
  return out;
}

bool ChainComplex::is_complex() const {
  for (int k = 2; k <= 3; ++k) {
    const auto at = d[static_cast<std::size_t>(k - 1)].transposed();
    const auto bt = d[static_cast<std::size_t>(k)].transposed();
    for (int c = 0; c < bt.rows(); ++c) {
      std::map<int, std::int64_t> acc;
      for (auto [r, v] : bt.row(c))
        for (auto [rr, x] : at.row(r)) acc[rr] += x * v;
      for (auto [r, v] : acc)
        if (v != 0) return false;
    }
  }
  return true;
}

std::vector<BoundaryComponent> boundary_inventory(const CellQuotient& q,
                                                  const std::function<int(FaceRef)>& annulus_of) {
  const auto faces = q.boundary_faces();
  const auto& cc = q.chains();
  std::map<int, int> pos;
  for (std::size_t i = 0; i < faces.size(); ++i) pos[faces[i]] = static_cast<int>(i);
  UnionFind uf(faces.size());
  std::map<int, int> first_face_at_edge;
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (int e : cc.occ[2][static_cast<std::size_t>(faces[i])]) {
      auto [it, fresh] = first_face_at_edge.emplace(e, static_cast<int>(i));
      if (!fresh) uf.unite(i, static_cast<std::size_t>(it->second));
    }
  std::map<std::size_t, int> comp_id;
  std::vector<BoundaryComponent> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::size_t r = uf.find(i);
    auto [it, fresh] = comp_id.emplace(r, static_cast<int>(out.size()));
    if (fresh) out.emplace_back();
    out[static_cast<std::size_t>(it->second)].faces.push_back(faces[i]);
  }
  for (auto& comp : out) {
    comp.euler_char = surface_euler_char(q, comp.faces);
    std::set<int> ann;
    bool all_sv = true;
    for (int f : comp.faces) {
      // A boundary 2-cell has exactly one reference.
      const FaceRef fr = q.face_refs(f).front();
      const auto cls = q.poly().cell(fr.cell).faces[static_cast<std::size_t>(fr.face)].cls;
      if (cls == FaceClass::DiscSv)
        comp.contains_sv = true;
      else
        all_sv = false;
      const int a = annulus_of ? annulus_of(fr) : -1;
      if (a >= 0) {
        ann.insert(a);
        ++comp.annulus_faces;
      }
    }
    comp.sv_only = comp.contains_sv && all_sv;
    comp.annuli.assign(ann.begin(), ann.end());
  }
  return out;
}

int surface_euler_char(const CellQuotient& q, const std::vector<int>& two_cells) {
  const auto& cc = q.chains();
  std::set<int> edges, verts;
  for (int f : two_cells)
    for (int e : cc.occ[2][static_cast<std::size_t>(f)]) {
      edges.insert(e);
      for (int v : cc.occ[1][static_cast<std::size_t>(e)]) verts.insert(v);
    }
  return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) + static_cast<int>(two_cells.size());
}

std::vector<std::map<int, std::int64_t>> boundary_circles(const CellQuotient& q, const std::vector<int>& two_cells) {
  const auto& cc = q.chains();
  std::map<int, int> uses;
  for (int f : two_cells)
    for (int e : cc.occ[2][static_cast<std::size_t>(f)]) ++uses[e];
  std::vector<int> bedges;
  for (auto [e, n] : uses)
    if (n == 1) bedges.push_back(e);
  // vertex -> incident boundary edges
  std::map<int, std::vector<int>> at;
  for (int e : bedges)
    for (int v : cc.occ[1][static_cast<std::size_t>(e)]) at[v].push_back(e);
  for (const auto& [v, es] : at)
    if (es.size() != 2) throw InternalError("boundary of the surface is not a union of circles");
  std::set<int> used;
  std::vector<std::map<int, std::int64_t>> out;
  for (int start : bedges) {
    if (used.count(start)) continue;
    std::map<int, std::int64_t> cyc;
    int e = start;
    int sign = 1;
    while (!used.count(e)) {
      used.insert(e);
      cyc[e] += sign;
      const auto& tv = cc.occ[1][static_cast<std::size_t>(e)];
      const int head = sign > 0 ? tv[1] : tv[0];
      const auto& cand = at[head];
      int next = cand[0] == e ? cand[1] : cand[0];
      if (cand[0] == e && cand[1] == e) break;  // a loop edge
      if (used.count(next)) break;
      const auto& nv = cc.occ[1][static_cast<std::size_t>(next)];
      sign = nv[0] == head ? 1 : -1;
      e = next;
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

}  // namespace gutscat
