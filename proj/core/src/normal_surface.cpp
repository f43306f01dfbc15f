#include "gutscat/normal_surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "gutscat/error.hpp"
#include "gutscat/exact.hpp"
#include "gutscat/tetra.hpp"
#include "union_find.hpp"

namespace gutscat {

using detail::ParityUF;
using detail::UnionFind;

using tetra::face_others;
using tetra::quad_partner;
using tetra::quad_side_zero;
using tetra::quad_type_pairing;

NormalSurfaceVector::NormalSurfaceVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {
  if (coords_.size() % 7 != 0) throw DomainError("surface vector length is not a multiple of 7");
}

NormalSurfaceVector NormalSurfaceVector::zero(int tet_count) {
  return NormalSurfaceVector(std::vector<std::int64_t>(static_cast<std::size_t>(7 * tet_count), 0));
}

int NormalSurfaceVector::quad_type(int tet) const {
  for (int k = 0; k < 3; ++k)
    if (quad(tet, k) != 0) return k;
  return -1;
}

std::int64_t NormalSurfaceVector::quad_count(int tet) const {
  const int k = quad_type(tet);
  return k < 0 ? 0 : quad(tet, k);
}

bool NormalSurfaceVector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

NormalSurfaceVector NormalSurfaceVector::operator+(const NormalSurfaceVector& other) const {
  if (other.size() != size()) throw DomainError("surface vector length mismatch");
  std::vector<std::int64_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = checked_add(coords_[i], other.coords_[i]);
  return NormalSurfaceVector(std::move(out));
}

NormalSurfaceVector NormalSurfaceVector::scaled(std::int64_t k) const {
  std::vector<std::int64_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = checked_mul(coords_[i], k);
  return NormalSurfaceVector(std::move(out));
}

std::string NormalSurfaceVector::str() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(coords_[i]);
  }
  return out;
}

NormalSurfaceVector parse_surface(const std::string& text) {
  std::vector<std::int64_t> coords;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::logic_error&) {
        throw DomainError("malformed surface coordinate '" + tok + "'");
      }
      if (used != tok.size()) throw DomainError("malformed surface coordinate '" + tok + "'");
      if (v < 0) throw DomainError("negative surface coordinate");
      coords.push_back(v);
    }
  }
  if (coords.empty()) throw DomainError("empty surface vector");
  return NormalSurfaceVector(std::move(coords));
}

NormalSurfaceVector load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open surface file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_surface(buf.str());
}

NormalSurfaceVector vertex_link(const Triangulation& tri) {
  if (tri.vertex_count() != 1) throw DomainError("vertex_link requires a one-vertex triangulation");
  auto v = NormalSurfaceVector::zero(tri.size());
  for (int t = 0; t < tri.size(); ++t)
    for (int c = 0; c < 4; ++c) v.set_tri(t, c, 1);
  return v;
}

namespace {

struct Equation {
  std::vector<std::pair<int, int>> terms;  // (coordinate index, coefficient)
  int max_tet = 0;
};

std::vector<Equation> matching_equations(const Triangulation& tri) {
  std::vector<Equation> eqs;
  for (int t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      const int u = g->tet, uf = g->perm[f];
      if (u < t || (u == t && uf < f)) continue;  // each glued pair once
      for (int c = 0; c < 4; ++c) {
        if (c == f) continue;
        const int uc = g->perm[c];
        Equation e;
        e.terms = {{7 * t + c, 1},
                   {7 * t + 4 + quad_type_pairing(c, f), 1},
                   {7 * u + uc, -1},
                   {7 * u + 4 + quad_type_pairing(uc, uf), -1}};
        e.max_tet = std::max(t, u);
        eqs.push_back(std::move(e));
      }
    }
  return eqs;
}

bool holds(const Equation& e, const std::vector<std::int64_t>& c) {
  std::int64_t s = 0;
  for (auto [i, k] : e.terms) s += k * c[static_cast<std::size_t>(i)];
  return s == 0;
}

}  // namespace

std::vector<std::vector<int>> matching_matrix(const Triangulation& tri) {
  std::vector<std::vector<int>> rows;
  for (const auto& e : matching_equations(tri)) {
    std::vector<int> row(static_cast<std::size_t>(7 * tri.size()), 0);
    for (auto [i, k] : e.terms) row[static_cast<std::size_t>(i)] += k;
    rows.push_back(std::move(row));
  }
  return rows;
}

bool satisfies_matching(const Triangulation& tri, const NormalSurfaceVector& v) {
  if (static_cast<int>(v.size()) != 7 * tri.size()) throw DomainError("surface vector length mismatch");
  for (const auto& e : matching_equations(tri))
    if (!holds(e, v.coords())) return false;
  return true;
}

bool satisfies_quad_constraint(const NormalSurfaceVector& v) {
  for (int t = 0; t < v.tet_count(); ++t) {
    int nonzero = 0;
    for (int k = 0; k < 3; ++k)
      if (v.quad(t, k) != 0) ++nonzero;
    if (nonzero > 1) return false;
  }
  return true;
}

bool is_admissible(const Triangulation& tri, const NormalSurfaceVector& v) {
  if (static_cast<int>(v.size()) != 7 * tri.size()) throw DomainError("surface vector length mismatch");
  for (auto c : v.coords())
    if (c < 0) return false;
  return satisfies_quad_constraint(v) && satisfies_matching(tri, v);
}

bool SurfaceComplex::two_sided() const {
  return std::all_of(components.begin(), components.end(), [](const SurfaceComponent& c) { return c.two_sided; });
}

namespace {

// Indexing helpers for the discs of one vector.
struct DiscIndex {
  const NormalSurfaceVector& v;
  std::vector<std::int64_t> tet_offset;  // first disc id of each tet
  std::int64_t total = 0;

  explicit DiscIndex(const NormalSurfaceVector& vec) : v(vec) {
    for (int t = 0; t < v.tet_count(); ++t) {
      tet_offset.push_back(total);
      for (int i = 0; i < 7; ++i) total += v.coords()[static_cast<std::size_t>(7 * t + i)];
    }
  }
  std::int64_t triangle(int t, int c, std::int64_t i) const {
    std::int64_t off = tet_offset[static_cast<std::size_t>(t)];
    for (int k = 0; k < c; ++k) off += v.tri(t, k);
    return off + i;
  }
  std::int64_t quad(int t, std::int64_t i) const {
    std::int64_t off = tet_offset[static_cast<std::size_t>(t)];
    for (int k = 0; k < 4; ++k) off += v.tri(t, k);
    return off + i;
  }
};

std::int64_t arc_count(const NormalSurfaceVector& v, int t, int f, int c) {
  return v.tri(t, c) + v.quad(t, quad_type_pairing(c, f));
}

std::int64_t edge_point_count(const NormalSurfaceVector& v, int t, int a, int b) {
  std::int64_t n = v.tri(t, a) + v.tri(t, b);
  const int k = v.quad_type(t);
  if (k >= 0 && tetra::quad_separates(k, a, b)) n += v.quad(t, k);
  return n;
}

// The disc owning arc j (counted from corner c) in face f of tet t, whether
// its transverse direction points away from c, and whether its canonical
// boundary cycle runs from the end on edge (c,u) to the end on edge (c,v).
struct ArcOwner {
  std::int64_t disc;
  bool normal_away;
  bool forward;
};

ArcOwner arc_owner(const DiscIndex& idx, int t, int f, int c, std::int64_t j) {
  const auto& v = idx.v;
  const auto [u, w] = face_others(f, c);  // u < w
  if (j < v.tri(t, c)) {
    // Triangle cycle visits the other three vertices in increasing order.
    int others[3], n = 0;
    for (int x = 0; x < 4; ++x)
      if (x != c) others[n++] = x;
    int pu = 0, pw = 0;
    for (int i = 0; i < 3; ++i) {
      if (others[i] == u) pu = i;
      if (others[i] == w) pw = i;
    }
    return {idx.triangle(t, c, j), true, (pu + 1) % 3 == pw};
  }
  const int k = quad_type_pairing(c, f);
  const std::int64_t q = v.quad(t, k);
  const std::int64_t pos = j - v.tri(t, c);
  const bool c_zero = quad_side_zero(k, c);
  const std::int64_t qi = c_zero ? pos : q - 1 - pos;
  // Quad cycle: (a1b1, a1b2, a2b2, a2b1) with a1 = 0, a2 = partner(0).
  const int a1 = 0, a2 = quad_partner(k, 0);
  int b1 = -1, b2 = -1;
  for (int x = 0; x < 4; ++x)
    if (x != a1 && x != a2) (b1 < 0 ? b1 : b2) = x;
  const int cyc[4] = {tetra::edge_index(a1, b1), tetra::edge_index(a1, b2), tetra::edge_index(a2, b2),
                      tetra::edge_index(a2, b1)};
  const int eu = tetra::edge_index(c, u), ew = tetra::edge_index(c, w);
  int pu = 0, pw = 0;
  for (int i = 0; i < 4; ++i) {
    if (cyc[i] == eu) pu = i;
    if (cyc[i] == ew) pw = i;
  }
  return {idx.quad(t, qi), c_zero, (pu + 1) % 4 == pw};
}

}  // namespace

SurfaceComplex build_surface(const Triangulation& tri, const NormalSurfaceVector& v) {
  if (!is_admissible(tri, v)) throw DomainError("build_surface requires an admissible vector");
  const int n = tri.size();
  DiscIndex discs(v);
  SurfaceComplex out;
  out.disc_counts = v.coords();

  // Arc occurrences: (t, f, c, j). Offsets for dense ids.
  std::vector<std::int64_t> arc_off(static_cast<std::size_t>(n * 16 + 1), 0);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      for (int c = 0; c < 4; ++c) {
        const std::size_t slot = static_cast<std::size_t>(16 * t + 4 * f + c);
        arc_off[slot + 1] = arc_off[slot] + (c == f ? 0 : arc_count(v, t, f, c));
      }
  const auto arc_id = [&](int t, int f, int c, std::int64_t j) {
    return arc_off[static_cast<std::size_t>(16 * t + 4 * f + c)] + j;
  };
  // Edge points: (t, e, i).
  std::vector<std::int64_t> pt_off(static_cast<std::size_t>(n * 6 + 1), 0);
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e) {
      const auto [a, b] = tetra::kEdgeVertices[static_cast<std::size_t>(e)];
      pt_off[static_cast<std::size_t>(6 * t + e + 1)] = pt_off[static_cast<std::size_t>(6 * t + e)] + edge_point_count(v, t, a, b);
    }
  // Point j counted from c on edge (c, x).
  const auto point_id = [&](int t, int c, int x, std::int64_t j) {
    const int e = tetra::edge_index(c, x);
    const std::int64_t len = pt_off[static_cast<std::size_t>(6 * t + e + 1)] - pt_off[static_cast<std::size_t>(6 * t + e)];
    return pt_off[static_cast<std::size_t>(6 * t + e)] + (c < x ? j : len - 1 - j);
  };

  const std::size_t total_arcs = static_cast<std::size_t>(arc_off.back());
  const std::size_t total_pts = static_cast<std::size_t>(pt_off.back());
  const std::size_t total_discs = static_cast<std::size_t>(discs.total);
  UnionFind arcs(total_arcs), pts(total_pts), comps(total_discs);
  ParityUF orient(total_discs), sides(total_discs);
  std::vector<std::size_t> bad_orient, bad_sides;

  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      for (int c = 0; c < 4; ++c) {
        if (c == f) continue;
        const std::int64_t count = arc_count(v, t, f, c);
        for (std::int64_t j = 0; j < count; ++j) {
          const auto [u, w] = face_others(f, c);
          const ArcOwner mine = arc_owner(discs, t, f, c, j);
          if (!g) continue;
          const int t2 = g->tet, f2 = g->perm[f], c2 = g->perm[c];
          arcs.unite(static_cast<std::size_t>(arc_id(t, f, c, j)), static_cast<std::size_t>(arc_id(t2, f2, c2, j)));
          pts.unite(static_cast<std::size_t>(point_id(t, c, u, j)), static_cast<std::size_t>(point_id(t2, c2, g->perm[u], j)));
          pts.unite(static_cast<std::size_t>(point_id(t, c, w, j)), static_cast<std::size_t>(point_id(t2, c2, g->perm[w], j)));
          const ArcOwner theirs = arc_owner(discs, t2, f2, c2, j);
          const auto a = static_cast<std::size_t>(mine.disc), b = static_cast<std::size_t>(theirs.disc);
          comps.unite(a, b);
          if (!sides.unite(a, b, mine.normal_away != theirs.normal_away ? 1 : 0)) bad_sides.push_back(a);
          // The partner's forward direction is measured from the image of
          // edge (c,u); if the images swap order the sense flips.
          const bool swapped = g->perm[u] > g->perm[w];
          const bool their_fwd = swapped ? !theirs.forward : theirs.forward;
          if (!orient.unite(a, b, mine.forward == their_fwd ? 1 : 0)) bad_orient.push_back(a);
        }
      }
    }

  // Global counts.
  std::vector<char> seen_arc(total_arcs, 0), seen_pt(total_pts, 0);
  for (std::size_t i = 0; i < total_arcs; ++i) seen_arc[arcs.find(i)] = 1;
  for (std::size_t i = 0; i < total_pts; ++i) seen_pt[pts.find(i)] = 1;
  out.edges = static_cast<int>(std::count(seen_arc.begin(), seen_arc.end(), 1));
  out.vertices = static_cast<int>(std::count(seen_pt.begin(), seen_pt.end(), 1));
  out.faces = static_cast<int>(total_discs);

  // Per-component counts: attribute each arc/point class to the component of
  // any disc touching it.
  std::vector<std::int64_t> arc_comp(total_arcs, -1), pt_comp(total_pts, -1);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      for (int c = 0; c < 4; ++c) {
        if (c == f) continue;
        const auto [u, w] = face_others(f, c);
        for (std::int64_t j = 0; j < arc_count(v, t, f, c); ++j) {
          const auto comp = static_cast<std::int64_t>(comps.find(static_cast<std::size_t>(arc_owner(discs, t, f, c, j).disc)));
          arc_comp[arcs.find(static_cast<std::size_t>(arc_id(t, f, c, j)))] = comp;
          pt_comp[pts.find(static_cast<std::size_t>(point_id(t, c, u, j)))] = comp;
          pt_comp[pts.find(static_cast<std::size_t>(point_id(t, c, w, j)))] = comp;
        }
      }

  std::vector<std::int64_t> comp_slot(total_discs, -1);
  std::vector<std::int64_t> verts, edges, faces;
  for (std::size_t d = 0; d < total_discs; ++d) {
    const std::size_t r = comps.find(d);
    if (comp_slot[r] < 0) {
      comp_slot[r] = static_cast<std::int64_t>(out.components.size());
      out.components.emplace_back();
      verts.push_back(0);
      edges.push_back(0);
      faces.push_back(0);
    }
    ++faces[static_cast<std::size_t>(comp_slot[r])];
  }
  for (std::size_t i = 0; i < total_arcs; ++i)
    if (arcs.find(i) == i && arc_comp[i] >= 0) ++edges[static_cast<std::size_t>(comp_slot[static_cast<std::size_t>(arc_comp[i])])];
  for (std::size_t i = 0; i < total_pts; ++i)
    if (pts.find(i) == i && pt_comp[i] >= 0) ++verts[static_cast<std::size_t>(comp_slot[static_cast<std::size_t>(pt_comp[i])])];
  for (auto d : bad_orient) out.components[static_cast<std::size_t>(comp_slot[comps.find(d)])].orientable = false;
  for (auto d : bad_sides) out.components[static_cast<std::size_t>(comp_slot[comps.find(d)])].two_sided = false;

  // Vertex-linking: only triangles, exactly one at every corner of every tet.
  std::vector<std::vector<int>> corner_hits(out.components.size(), std::vector<int>(static_cast<std::size_t>(4 * n), 0));
  std::vector<char> has_quad(out.components.size(), 0);
  for (int t = 0; t < n; ++t) {
    for (int c = 0; c < 4; ++c)
      for (std::int64_t i = 0; i < v.tri(t, c); ++i)
        ++corner_hits[static_cast<std::size_t>(comp_slot[comps.find(static_cast<std::size_t>(discs.triangle(t, c, i)))])][static_cast<std::size_t>(4 * t + c)];
    for (std::int64_t i = 0; i < v.quad_count(t); ++i)
      has_quad[static_cast<std::size_t>(comp_slot[comps.find(static_cast<std::size_t>(discs.quad(t, i)))])] = 1;
  }
  for (std::size_t k = 0; k < out.components.size(); ++k) {
    auto& comp = out.components[k];
    comp.euler_char = static_cast<int>(verts[k] - edges[k] + faces[k]);
    comp.disc_count = faces[k];
    comp.is_vertex_linking =
        !has_quad[k] && std::all_of(corner_hits[k].begin(), corner_hits[k].end(), [](int h) { return h == 1; });
  }
  return out;
}

NormalSurfaceVector strip_vertex_linking(const NormalSurfaceVector& v) {
  if (v.size() == 0) return v;
  std::int64_t k = v.tri(0, 0);
  for (int t = 0; t < v.tet_count(); ++t)
    for (int c = 0; c < 4; ++c) k = std::min(k, v.tri(t, c));
  auto out = v;
  for (int t = 0; t < v.tet_count(); ++t)
    for (int c = 0; c < 4; ++c) out.set_tri(t, c, v.tri(t, c) - k);
  return out;
}

namespace {

// Box search, one tetrahedron at a time, with matching equations checked as
// soon as all their coordinates are assigned.
class BoxSearch {
 public:
  BoxSearch(const Triangulation& tri, int bound) : n_(tri.size()), bound_(bound) {
    const auto eqs = matching_equations(tri);
    ready_.resize(static_cast<std::size_t>(n_));
    for (const auto& e : eqs) ready_[static_cast<std::size_t>(e.max_tet)].push_back(e);
    // Local options: quad choice (none or type k with count 1..bound), then triangles.
    for (int k = -1; k < 3; ++k) {
      for (int q = (k < 0 ? 0 : 1); q <= (k < 0 ? 0 : bound); ++q) {
        std::array<int, 4> tr{0, 0, 0, 0};
        while (true) {
          std::array<std::int64_t, 7> opt{tr[0], tr[1], tr[2], tr[3], 0, 0, 0};
          if (k >= 0) opt[static_cast<std::size_t>(4 + k)] = q;
          options_.push_back(opt);
          int i = 0;
          while (i < 4 && tr[static_cast<std::size_t>(i)] == bound) tr[static_cast<std::size_t>(i++)] = 0;
          if (i == 4) break;
          ++tr[static_cast<std::size_t>(i)];
        }
        if (k < 0) break;
      }
    }
  }

  std::size_t option_count() const { return options_.size(); }

  void run_from(std::size_t first_option, std::vector<NormalSurfaceVector>& out) const {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(7 * n_), 0);
    place(0, options_[first_option], coords);
    if (!check(0, coords)) return;
    recurse(1, coords, out);
  }

 private:
  void place(int t, const std::array<std::int64_t, 7>& opt, std::vector<std::int64_t>& coords) const {
    std::copy(opt.begin(), opt.end(), coords.begin() + 7 * t);
  }
  bool check(int t, const std::vector<std::int64_t>& coords) const {
    for (const auto& e : ready_[static_cast<std::size_t>(t)])
      if (!holds(e, coords)) return false;
    return true;
  }
  void recurse(int t, std::vector<std::int64_t>& coords, std::vector<NormalSurfaceVector>& out) const {
    if (t == n_) {
      std::int64_t min_tri = coords[0];
      for (int u = 0; u < n_; ++u)
        for (int c = 0; c < 4; ++c) min_tri = std::min(min_tri, coords[static_cast<std::size_t>(7 * u + c)]);
      if (min_tri == 0) out.emplace_back(coords);
      return;
    }
    for (const auto& opt : options_) {
      place(t, opt, coords);
      if (check(t, coords)) recurse(t + 1, coords, out);
    }
  }

  int n_;
  int bound_;
  std::vector<std::vector<Equation>> ready_;
  std::vector<std::array<std::int64_t, 7>> options_;
};

}  // namespace

std::vector<NormalSurfaceVector> enumerate_admissible(const Triangulation& tri, int bound,
                                                      const EnumerationOptions& opts) {
  if (bound < 0) throw DomainError("enumeration bound must be non-negative");
  if (tri.size() == 0) throw DomainError("no tetrahedra");
  const double bits = 7.0 * tri.size() * std::log2(static_cast<double>(bound) + 1.0);
  if (bits > opts.guard_bits)
    throw GuardError("enumeration guard exceeded: 7t*log2(k+1) = " + std::to_string(bits) + " bits > " +
                     std::to_string(opts.guard_bits));
  BoxSearch search(tri, bound);
  const std::size_t total = search.option_count();
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(total)));
  std::vector<std::vector<NormalSurfaceVector>> parts(total);
  if (threads == 1) {
    for (std::size_t i = 0; i < total; ++i) search.run_from(i, parts[i]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < total; i += static_cast<std::size_t>(threads))
          search.run_from(i, parts[i]);
      });
    for (auto& th : pool) th.join();
  }
  std::vector<NormalSurfaceVector> out;
  for (auto& p : parts)
    for (auto& v : p) out.push_back(std::move(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace gutscat
