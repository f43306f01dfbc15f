#include "gutscat/cut_complex.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "gutscat/error.hpp"
#include "gutscat/tetra.hpp"

namespace gutscat {

const char* to_string(PieceKind k) {
  switch (k) {
    case PieceKind::TruncatedTet: return "truncated-tet";
    case PieceKind::TruncatedPrism: return "truncated-prism";
    case PieceKind::ProductBlock: return "product";
  }
  return "?";
}

int CutComplex::frontier_count() const {
  int n = 0;
  for (const auto& g : complex.gluings())
    if (g.kind == GlueKind::Frontier) ++n;
  return n;
}

namespace {

using Vec3 = std::array<double, 3>;

constexpr std::array<Vec3, 4> kCorner{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};

// Points on tetrahedron edges. On edge {a,b} of tet t the points are, from a:
// the vertex-link point, the S-triangles at a, the quads (when the quad type
// separates a from b), the S-triangles at b, the vertex-link point at b.
class EdgePoints {
 public:
  EdgePoints(const NormalSurfaceVector& v) : v_(v) {
    const int n = v.tet_count();
    for (int t = 0; t < n; ++t)
      for (int e = 0; e < 6; ++e) {
        const auto [a, b] = tetra::kEdgeVertices[static_cast<std::size_t>(e)];
        std::int64_t len = v.tri(t, a) + v.tri(t, b) + 2;
        const int k = v.quad_type(t);
        if (k >= 0 && tetra::quad_separates(k, a, b)) len += v.quad(t, k);
        off_.push_back(total_);
        len_.push_back(len);
        total_ += len;
      }
  }

  std::int64_t length(int t, int a, int b) const { return len_[static_cast<std::size_t>(6 * t + tetra::edge_index(a, b))]; }

  /// Point i counted from a on edge {a,b} of tet t.
  std::int64_t at(int t, int a, int b, std::int64_t i) const {
    const std::size_t slot = static_cast<std::size_t>(6 * t + tetra::edge_index(a, b));
    if (i < 0 || i >= len_[slot]) throw InternalError("edge point index out of range");
    return off_[slot] + (a < b ? i : len_[slot] - 1 - i);
  }

  /// (tet, a, b, i) with a < b for a point id.
  std::array<std::int64_t, 4> decode(std::int64_t id) const {
    const auto it = std::upper_bound(off_.begin(), off_.end(), id) - 1;
    const auto slot = static_cast<std::size_t>(it - off_.begin());
    const auto [a, b] = tetra::kEdgeVertices[slot % 6];
    return {static_cast<std::int64_t>(slot / 6), a, b, id - *it};
  }

  Vec3 position(std::int64_t id) const {
    const auto [t, a, b, i] = decode(id);
    const double f = static_cast<double>(i + 1) / static_cast<double>(length(static_cast<int>(t), static_cast<int>(a), static_cast<int>(b)) + 1);
    Vec3 out{};
    for (int c = 0; c < 3; ++c)
      out[static_cast<std::size_t>(c)] = kCorner[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] +
                                         f * (kCorner[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] -
                                              kCorner[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]);
    return out;
  }

  /// The image of a point of tet t under the gluing of face f.
  std::int64_t across(const Triangulation& tri, int t, int f, std::int64_t id) const {
    const auto [tt, a, b, i] = decode(id);
    if (tt != t || a == f || b == f) throw InternalError("point is not on the glued face");
    const auto& g = tri.gluing(t, f);
    if (!g) throw InternalError("face is not glued");
    return at(g->tet, g->perm[static_cast<int>(a)], g->perm[static_cast<int>(b)], i);
  }

 private:
  const NormalSurfaceVector& v_;
  std::vector<std::int64_t> off_, len_;
  std::int64_t total_ = 0;
};

struct FaceSpec {
  std::vector<std::int64_t> pts;
  FaceClass cls;
  CutFaceInfo info;
};

struct PieceSpec {
  CutPiece piece;
  std::vector<FaceSpec> faces;
};

// Local cell from faces given by global points; orients every face outward
// using the realisation of the tetrahedron as a regular simplex, then
// reverses all faces when the tetrahedron is negatively oriented so that
// every face gluing reverses orientation.
std::pair<CutPiece, PolyCell> realise(const EdgePoints& ep, PieceSpec spec, int orientation) {
  std::map<std::int64_t, int> local;
  for (const auto& f : spec.faces)
    for (auto p : f.pts)
      if (!local.count(p)) local.emplace(p, 0);
  int n = 0;
  for (auto& [p, i] : local) i = n++;
  CutPiece piece = std::move(spec.piece);
  piece.points.resize(static_cast<std::size_t>(n));
  for (const auto& [p, i] : local) piece.points[static_cast<std::size_t>(i)] = p;

  Vec3 centre{0, 0, 0};
  for (auto p : piece.points) {
    const auto x = ep.position(p);
    for (int c = 0; c < 3; ++c) centre[static_cast<std::size_t>(c)] += x[static_cast<std::size_t>(c)] / n;
  }
  PolyCell cell;
  cell.vertex_count = n;
  for (auto& f : spec.faces) {
    Vec3 normal{0, 0, 0}, fc{0, 0, 0};
    const std::size_t m = f.pts.size();
    for (std::size_t k = 0; k < m; ++k) {
      const auto p = ep.position(f.pts[k]);
      const auto q = ep.position(f.pts[(k + 1) % m]);
      normal[0] += (p[1] - q[1]) * (p[2] + q[2]);
      normal[1] += (p[2] - q[2]) * (p[0] + q[0]);
      normal[2] += (p[0] - q[0]) * (p[1] + q[1]);
      for (int c = 0; c < 3; ++c) fc[static_cast<std::size_t>(c)] += p[static_cast<std::size_t>(c)] / static_cast<double>(m);
    }
    double dot = 0;
    for (int c = 0; c < 3; ++c) dot += normal[static_cast<std::size_t>(c)] * (fc[static_cast<std::size_t>(c)] - centre[static_cast<std::size_t>(c)]);
    if (dot == 0) throw InternalError("degenerate face orientation");
    if ((dot < 0) != (orientation < 0)) std::reverse(f.pts.begin(), f.pts.end());
    PolyFace face;
    face.cls = f.cls;
    for (auto p : f.pts) face.verts.push_back(local.at(p));
    cell.faces.push_back(std::move(face));
    piece.faces.push_back(f.info);
  }
  if (piece.kind == PieceKind::ProductBlock) {
    // Fibres join the two disc faces (faces 0 and 1) along tet edges.
    piece.level.assign(static_cast<std::size_t>(n), -1);
    piece.fiber.assign(static_cast<std::size_t>(n), -1);
    const auto& lo = spec.faces[0].pts;
    const auto& hi = spec.faces[1].pts;
    for (auto p : lo) piece.level[static_cast<std::size_t>(local.at(p))] = 0;
    for (auto p : hi) piece.level[static_cast<std::size_t>(local.at(p))] = 1;
    for (auto p : lo) {
      const auto [t, a, b, i] = ep.decode(p);
      for (auto q : hi) {
        const auto [t2, a2, b2, i2] = ep.decode(q);
        if (a2 == a && b2 == b) {
          piece.fiber[static_cast<std::size_t>(local.at(p))] = local.at(q);
          piece.fiber[static_cast<std::size_t>(local.at(q))] = local.at(p);
        }
      }
    }
  }
  return {std::move(piece), std::move(cell)};
}

std::vector<PieceSpec> tet_pieces(const NormalSurfaceVector& v, const EdgePoints& ep, int t) {
  std::vector<PieceSpec> out;
  const int k = v.quad_type(t);
  const std::int64_t Q = v.quad_count(t);
  const auto tc = [&](int c) { return v.tri(t, c); };
  const auto T = [&](int c, int x, std::int64_t l) { return ep.at(t, c, x, l); };
  const auto others = [](int c) {
    std::array<int, 3> o{};
    int n = 0;
    for (int x = 0; x < 4; ++x)
      if (x != c) o[static_cast<std::size_t>(n++)] = x;
    return o;
  };
  const auto tri_face = [&](int c, std::int64_t l) {
    FaceSpec f;
    for (int x : others(c)) f.pts.push_back(T(c, x, l));
    f.cls = l == 0 ? FaceClass::DiscSv : FaceClass::DiscS;
    f.info.disc_type = c;
    f.info.layer = static_cast<int>(l);
    return f;
  };
  const auto in_face = [](FaceClass cls, int face) {
    FaceSpec f;
    f.cls = cls;
    f.info.tet_face = face;
    return f;
  };

  // Triangle product blocks between layers l and l+1 at each corner.
  for (int c = 0; c < 4; ++c)
    for (std::int64_t l = 0; l < tc(c); ++l) {
      PieceSpec ps;
      ps.piece.kind = PieceKind::ProductBlock;
      ps.piece.source_tet = t;
      ps.piece.disc_type = c;
      ps.piece.layer = static_cast<int>(l);
      ps.faces.push_back(tri_face(c, l));
      ps.faces.push_back(tri_face(c, l + 1));
      const auto o = others(c);
      for (int i = 0; i < 3; ++i) {
        const int x = o[static_cast<std::size_t>(i)], y = o[static_cast<std::size_t>((i + 1) % 3)];
        const int z = o[static_cast<std::size_t>((i + 2) % 3)];
        auto f = in_face(FaceClass::VerticalQuad, z);
        f.pts = {T(c, x, l), T(c, x, l + 1), T(c, y, l + 1), T(c, y, l)};
        ps.faces.push_back(std::move(f));
      }
      out.push_back(std::move(ps));
    }

  if (k < 0) {
    PieceSpec ps;
    ps.piece.kind = PieceKind::TruncatedTet;
    ps.piece.source_tet = t;
    for (int c = 0; c < 4; ++c) ps.faces.push_back(tri_face(c, tc(c)));
    for (int f = 0; f < 4; ++f) {
      const auto o = others(f);
      auto face = in_face(FaceClass::Hexagonal, f);
      for (int i = 0; i < 3; ++i) {
        const int c1 = o[static_cast<std::size_t>(i)], c2 = o[static_cast<std::size_t>((i + 1) % 3)];
        face.pts.push_back(T(c1, c2, tc(c1)));
        face.pts.push_back(T(c2, c1, tc(c2)));
      }
      ps.faces.push_back(std::move(face));
    }
    out.push_back(std::move(ps));
    return out;
  }

  // Quad discs are indexed from the side containing vertex 0.
  const auto on_zero_side = [&](int a) { return tetra::quad_side_zero(k, a); };
  const auto qp = [&](std::int64_t qi, int a, int b) {
    return ep.at(t, a, b, tc(a) + 1 + (on_zero_side(a) ? qi : Q - 1 - qi));
  };
  const int a1 = 0, a2 = tetra::quad_partner(k, 0);
  std::array<int, 2> bs{};
  {
    int n = 0;
    for (int x = 0; x < 4; ++x)
      if (x != a1 && x != a2) bs[static_cast<std::size_t>(n++)] = x;
  }
  const auto quad_face = [&](std::int64_t qi) {
    FaceSpec f;
    f.pts = {qp(qi, a1, bs[0]), qp(qi, a1, bs[1]), qp(qi, a2, bs[1]), qp(qi, a2, bs[0])};
    f.cls = FaceClass::DiscS;
    f.info.disc_type = 4;
    f.info.layer = static_cast<int>(qi);
    return f;
  };
  // Separated edges avoiding vertex f, as (side-zero vertex, other vertex).
  const auto separated_avoiding = [&](int f) {
    std::vector<std::pair<int, int>> es;
    for (int a : {a1, a2})
      for (int b : bs)
        if (a != f && b != f) es.emplace_back(a, b);
    return es;
  };

  for (std::int64_t qi = 0; qi + 1 < Q; ++qi) {
    PieceSpec ps;
    ps.piece.kind = PieceKind::ProductBlock;
    ps.piece.source_tet = t;
    ps.piece.disc_type = 4;
    ps.piece.layer = static_cast<int>(qi);
    ps.faces.push_back(quad_face(qi));
    ps.faces.push_back(quad_face(qi + 1));
    for (int f = 0; f < 4; ++f) {
      const auto es = separated_avoiding(f);
      auto face = in_face(FaceClass::VerticalQuad, f);
      face.pts = {qp(qi, es[0].first, es[0].second), qp(qi + 1, es[0].first, es[0].second),
                  qp(qi + 1, es[1].first, es[1].second), qp(qi, es[1].first, es[1].second)};
      ps.faces.push_back(std::move(face));
    }
    out.push_back(std::move(ps));
  }

  for (int side = 0; side < 2; ++side) {
    const int x = side == 0 ? a1 : bs[0], y = side == 0 ? a2 : bs[1];
    const int z = side == 0 ? bs[0] : a1, w = side == 0 ? bs[1] : a2;
    const std::int64_t qi = side == 0 ? 0 : Q - 1;
    PieceSpec ps;
    ps.piece.kind = PieceKind::TruncatedPrism;
    ps.piece.source_tet = t;
    ps.piece.disc_type = 4;
    ps.piece.layer = side;
    ps.faces.push_back(tri_face(x, tc(x)));
    ps.faces.push_back(tri_face(y, tc(y)));
    ps.faces.push_back(quad_face(qi));
    for (int far : {z, w}) {
      const int near = far == z ? w : z;  // the far-side vertex in this face
      auto face = in_face(FaceClass::Hexagonal, far);
      face.pts = {T(x, y, tc(x)), T(y, x, tc(y)), T(y, near, tc(y)), qp(qi, y, near), qp(qi, x, near), T(x, near, tc(x))};
      ps.faces.push_back(std::move(face));
    }
    for (int opp : {x, y}) {
      const int s = opp == x ? y : x;
      auto face = in_face(FaceClass::QuadFace, opp);
      face.pts = {T(s, z, tc(s)), qp(qi, s, z), qp(qi, s, w), T(s, w, tc(s))};
      ps.faces.push_back(std::move(face));
    }
    out.push_back(std::move(ps));
  }
  return out;
}

GlueKind pairing_kind(FaceClass a, FaceClass b) {
  if (a == FaceClass::Hexagonal && b == FaceClass::Hexagonal) return GlueKind::Hexagonal;
  if (a == FaceClass::QuadFace && b == FaceClass::QuadFace) return GlueKind::QuadQuad;
  if (a == FaceClass::VerticalQuad && b == FaceClass::VerticalQuad) return GlueKind::Vertical;
  if ((a == FaceClass::QuadFace && b == FaceClass::VerticalQuad) ||
      (a == FaceClass::VerticalQuad && b == FaceClass::QuadFace))
    return GlueKind::Frontier;
  throw InternalError(std::string("inconsistent face pairing: ") + to_string(a) + " with " + to_string(b));
}

}  // namespace

CutComplex cut_along(const Triangulation& tri, const NormalSurfaceVector& v) {
  if (!tri.is_closed()) throw DomainError("triangulation is not closed");
  if (!is_admissible(tri, v)) throw DomainError("surface vector is not admissible");
  if (!v.is_zero()) {
    if (strip_vertex_linking(v) != v) throw DomainError("surface has vertex-linking components; strip them first");
    if (!build_surface(tri, v).two_sided()) throw DomainError("surface is one-sided");
  }
  CutComplex out;
  out.tet_count = tri.size();
  out.surface = v;
  EdgePoints ep(v);
  const auto orient = tri.orientation();
  if (!orient) throw DomainError("triangulation is not orientable");

  for (int t = 0; t < tri.size(); ++t)
    for (auto& spec : tet_pieces(v, ep, t)) {
      auto [piece, cell] = realise(ep, std::move(spec), (*orient)[static_cast<std::size_t>(t)]);
      out.complex.add_cell(std::move(cell));
      out.pieces.push_back(std::move(piece));
    }

  // Region indices and a lookup of faces lying in tetrahedron faces.
  std::map<std::pair<int, std::vector<std::int64_t>>, FaceRef> by_points;
  std::map<std::pair<int, int>, std::vector<std::pair<std::vector<std::int64_t>, FaceRef>>> per_face;
  for (int p = 0; p < static_cast<int>(out.pieces.size()); ++p) {
    const auto& piece = out.pieces[static_cast<std::size_t>(p)];
    const auto& cell = out.complex.cell(p);
    for (int f = 0; f < static_cast<int>(cell.faces.size()); ++f) {
      const int tf = piece.faces[static_cast<std::size_t>(f)].tet_face;
      if (tf < 0) continue;
      std::vector<std::int64_t> key;
      for (int lv : cell.faces[static_cast<std::size_t>(f)].verts) key.push_back(piece.points[static_cast<std::size_t>(lv)]);
      std::sort(key.begin(), key.end());
      if (!by_points.emplace(std::make_pair(piece.source_tet, key), FaceRef{p, f}).second)
        throw InternalError("two regions with the same corners");
      per_face[{piece.source_tet, tf}].emplace_back(key, FaceRef{p, f});
    }
  }
  for (auto& [tf, list] : per_face) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size(); ++i)
      out.pieces[static_cast<std::size_t>(list[i].second.cell)].faces[static_cast<std::size_t>(list[i].second.face)].region =
          static_cast<int>(i);
  }

  for (const auto& [key, fr] : by_points) {
    const auto& piece = out.pieces[static_cast<std::size_t>(fr.cell)];
    const int t = piece.source_tet;
    const int tf = piece.faces[static_cast<std::size_t>(fr.face)].tet_face;
    const auto& verts = out.complex.cell(fr.cell).faces[static_cast<std::size_t>(fr.face)].verts;
    std::vector<std::int64_t> image;
    for (int lv : verts) image.push_back(ep.across(tri, t, tf, piece.points[static_cast<std::size_t>(lv)]));
    auto sorted = image;
    std::sort(sorted.begin(), sorted.end());
    const auto it = by_points.find({tri.gluing(t, tf)->tet, sorted});
    if (it == by_points.end()) throw InternalError("face region has no partner across the gluing");
    const FaceRef other = it->second;
    if (!(fr < other)) continue;
    const auto& opiece = out.pieces[static_cast<std::size_t>(other.cell)];
    const auto& overts = out.complex.cell(other.cell).faces[static_cast<std::size_t>(other.face)].verts;
    PolyGluing g;
    g.a = fr;
    g.b = other;
    for (auto p : image) {
      const auto pos = std::find_if(overts.begin(), overts.end(),
                                    [&](int lv) { return opiece.points[static_cast<std::size_t>(lv)] == p; });
      g.map.push_back(static_cast<int>(pos - overts.begin()));
    }
    g.kind = pairing_kind(out.complex.cell(fr.cell).faces[static_cast<std::size_t>(fr.face)].cls,
                          out.complex.cell(other.cell).faces[static_cast<std::size_t>(other.face)].cls);
    out.complex.add_gluing(std::move(g));
  }
  // Every face in a tetrahedron face must be paired.
  for (const auto& [key, fr] : by_points)
    if (out.complex.gluing_at(fr) < 0) throw InternalError("unpaired face region");
  return out;
}

PieceCensus piece_census(const CutComplex& cc) {
  PieceCensus c;
  for (const auto& p : cc.pieces) {
    if (p.kind == PieceKind::TruncatedTet) ++c.truncated_tets;
    if (p.kind == PieceKind::TruncatedPrism) ++c.prisms;
    if (p.kind == PieceKind::ProductBlock) ++c.products;
  }
  if (c.truncated_tets > cc.tet_count || c.prisms > 2 * cc.tet_count)
    throw InternalError("piece census exceeds n <= t, m <= 2t");
  return c;
}

bool quad_rule_holds(const CutComplex& cc) {
  std::vector<int> tets(static_cast<std::size_t>(cc.tet_count), 0), prisms(static_cast<std::size_t>(cc.tet_count), 0);
  for (const auto& p : cc.pieces) {
    if (p.kind == PieceKind::TruncatedTet) ++tets[static_cast<std::size_t>(p.source_tet)];
    if (p.kind == PieceKind::TruncatedPrism) ++prisms[static_cast<std::size_t>(p.source_tet)];
  }
  for (int t = 0; t < cc.tet_count; ++t) {
    const bool quad = cc.surface.quad_count(t) > 0;
    if (quad && (prisms[static_cast<std::size_t>(t)] != 2 || tets[static_cast<std::size_t>(t)] != 0)) return false;
    if (!quad && (prisms[static_cast<std::size_t>(t)] != 0 || tets[static_cast<std::size_t>(t)] != 1)) return false;
  }
  return true;
}

}  // namespace gutscat
