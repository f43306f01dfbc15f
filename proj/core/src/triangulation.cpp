#include "gutscat/triangulation.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "gutscat/error.hpp"
#include "gutscat/tetra.hpp"

namespace gutscat {

namespace {

// Union-find with a parity bit, used for edge orientations.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::pair<std::size_t, int> find(std::size_t x) {
    int p = 0;
    std::size_t root = x;
    while (parent_[root] != root) {
      p ^= parity_[root];
      root = parent_[root];
    }
    // Path compression, keeping parities relative to the root.
    int acc = p;
    while (parent_[x] != x) {
      const std::size_t next = parent_[x];
      const int px = parity_[x];
      parent_[x] = root;
      parity_[x] = acc;
      acc ^= px;
      x = next;
    }
    return {root, p};
  }
  // Returns false on a parity contradiction.
  bool unite(std::size_t a, std::size_t b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    parent_[ra] = rb;
    parity_[ra] = pa ^ pb ^ rel;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
};

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::vector<std::string>> table_tokens(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(strip_comment(line));
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

}  // namespace

Triangulation::Triangulation(std::vector<std::array<std::optional<FaceGluing>, 4>> gluings)
    : gluings_(std::move(gluings)) {
  const int n = size();
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluing(t, f);
      if (!g) continue;
      if (g->tet < 0 || g->tet >= n)
        throw DomainError("out-of-range tetrahedron index " + std::to_string(g->tet));
      if (!g->perm.is_valid()) throw DomainError("invalid permutation");
      const int tf = g->perm[f];
      if (g->tet == t && tf == f) throw DomainError("face glued to itself");
      const auto& back = gluing(g->tet, tf);
      if (!back || back->tet != t || back->perm != g->perm.inverse())
        throw DomainError("dangling face: tet " + std::to_string(t) + " face " + std::to_string(f) +
                          " is not glued back by its target");
    }
  }
}

bool Triangulation::is_closed() const {
  for (const auto& row : gluings_)
    for (const auto& g : row)
      if (!g) return false;
  return true;
}

std::optional<std::vector<int>> Triangulation::orientation() const {
  const int n = size();
  std::vector<int> sign(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (sign[static_cast<std::size_t>(start)] != 0) continue;
    sign[static_cast<std::size_t>(start)] = 1;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluing(t, f);
        if (!g) continue;
        // Gluings must reverse orientation: s_t * s_u * sign(perm) == -1.
        const int want = -sign[static_cast<std::size_t>(t)] * g->perm.sign();
        int& su = sign[static_cast<std::size_t>(g->tet)];
        if (su == 0) {
          su = want;
          stack.push_back(g->tet);
        } else if (su != want) {
          return std::nullopt;
        }
      }
    }
  }
  return sign;
}

int Triangulation::vertex_count() const {
  const int n = size();
  std::vector<int> parent(static_cast<std::size_t>(4 * n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluing(t, f);
      if (!g) continue;
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        parent[static_cast<std::size_t>(find(4 * t + v))] = find(4 * g->tet + g->perm[v]);
      }
    }
  int count = 0;
  for (int i = 0; i < 4 * n; ++i)
    if (find(i) == i) ++count;
  return count;
}

namespace {

struct EdgeClasses {
  int count = 0;
  bool valid = true;
};

EdgeClasses edge_classes(const Triangulation& tri) {
  const int n = tri.size();
  ParityUnionFind uf(static_cast<std::size_t>(6 * n));
  EdgeClasses out;
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      for (int e = 0; e < 6; ++e) {
        const auto [a, b] = tetra::kEdgeVertices[static_cast<std::size_t>(e)];
        if (a == f || b == f) continue;
        const int pa = g->perm[a], pb = g->perm[b];
        const int rel = pa > pb ? 1 : 0;
        if (!uf.unite(static_cast<std::size_t>(6 * t + e),
                      static_cast<std::size_t>(6 * g->tet + tetra::edge_index(pa, pb)), rel))
          out.valid = false;
      }
    }
  for (int i = 0; i < 6 * n; ++i)
    if (uf.find(static_cast<std::size_t>(i)).first == static_cast<std::size_t>(i)) ++out.count;
  return out;
}

}  // namespace

int Triangulation::edge_count() const { return edge_classes(*this).count; }
bool Triangulation::edges_valid() const { return edge_classes(*this).valid; }

Triangulation Triangulation::relabeled(const std::vector<int>& perm) const {
  const int n = size();
  if (static_cast<int>(perm.size()) != n) throw DomainError("relabeling has wrong length");
  std::vector<std::array<std::optional<FaceGluing>, 4>> out(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      auto g = gluing(t, f);
      if (g) g->tet = perm[static_cast<std::size_t>(g->tet)];
      out[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])][static_cast<std::size_t>(f)] = g;
    }
  return Triangulation(std::move(out));
}

Triangulation parse_triangulation(const std::string& text) {
  const auto rows = table_tokens(text);
  if (rows.empty()) throw DomainError("no tetrahedra");
  const int n = static_cast<int>(rows.size());
  std::vector<std::array<std::optional<FaceGluing>, 4>> gl(static_cast<std::size_t>(n));
  // Who claims each target face; detects two faces glued onto one.
  std::vector<std::array<int, 4>> claimed(static_cast<std::size_t>(n), {-1, -1, -1, -1});
  for (int t = 0; t < n; ++t) {
    const auto& toks = rows[static_cast<std::size_t>(t)];
    if (toks.size() != 4)
      throw DomainError("malformed line " + std::to_string(t) + ": expected 4 tokens, got " +
                        std::to_string(toks.size()));
    for (int f = 0; f < 4; ++f) {
      const std::string& tok = toks[static_cast<std::size_t>(f)];
      if (tok == "-") continue;
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) throw DomainError("malformed token '" + tok + "'");
      int target = 0;
      try {
        std::size_t used = 0;
        target = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw DomainError("malformed token '" + tok + "'");
      } catch (const std::logic_error&) {
        throw DomainError("malformed token '" + tok + "'");
      }
      Perm4 p;
      if (!Perm4::parse(std::string_view(tok).substr(colon + 1), p))
        throw DomainError("malformed permutation in token '" + tok + "'");
      if (target < 0 || target >= n) throw DomainError("out-of-range tetrahedron index " + std::to_string(target));
      int& who = claimed[static_cast<std::size_t>(target)][static_cast<std::size_t>(p[f])];
      if (who >= 0) throw DomainError("face glued twice: tet " + std::to_string(target) + " face " +
                                      std::to_string(p[f]) + " is the target of two faces");
      who = 4 * t + f;
      gl[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)] = FaceGluing{target, p};
    }
  }
  return Triangulation(std::move(gl));
}

Triangulation load_triangulation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open triangulation file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_triangulation(buf.str());
}

std::string serialize(const Triangulation& tri) {
  std::string out;
  for (int t = 0; t < tri.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      if (f) out += ' ';
      const auto& g = tri.gluing(t, f);
      out += g ? std::to_string(g->tet) + ":" + g->perm.str() : "-";
    }
    out += '\n';
  }
  return out;
}

std::string normalize_table_text(const std::string& text) {
  std::string out;
  for (const auto& row : table_tokens(text)) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

ValidationReport validate(const Triangulation& tri) {
  ValidationReport r;
  r.closed = tri.is_closed();
  r.orientable = tri.orientation().has_value();
  r.vertex_count = tri.vertex_count();
  const auto edges = edge_classes(tri);
  r.edges_valid = edges.valid;

  // Vertex link: one triangle per (tet, corner); link edges are the pairs of
  // triangles meeting across a glued face, link vertices are edge ends.
  const int n = tri.size();
  int link_edges = 0;
  std::vector<int> parent(static_cast<std::size_t>(4 * n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      // Three link-triangle sides lie on each tetrahedron face.
      if (!g) {
        link_edges += 3;
        continue;
      }
      if (g->tet > t || (g->tet == t && g->perm[f] > f)) link_edges += 3;
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        const int a = find(4 * t + v), b = find(4 * g->tet + g->perm[v]);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    }
  int link_components = 0;
  for (int i = 0; i < 4 * n; ++i)
    if (find(i) == i) ++link_components;
  // Each edge class contributes one link vertex per end; boundary edges still
  // count once per end, which is all the link's vertex set needs.
  const int link_vertices = 2 * edges.count;
  r.vertex_link_euler = link_vertices - link_edges + 4 * n;
  r.vertex_link_connected = link_components == 1;
  return r;
}

void require_valid_one_vertex(const Triangulation& tri) {
  const auto r = validate(tri);
  if (!r.ok())
    throw DomainError("triangulation is not a closed orientable one-vertex triangulation with valid edges");
}

}  // namespace gutscat
