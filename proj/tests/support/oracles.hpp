#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gutscat/exact.hpp"
#include "gutscat/jsj_gluing.hpp"
#include "gutscat/smith.hpp"
#include "gutscat/triangulation.hpp"

namespace oracle {

using gutscat::BigInt;
using gutscat::Rational;
using Dense = std::vector<std::vector<BigInt>>;

inline Dense to_dense(const gutscat::SparseMatrix& m) {
  Dense out(static_cast<std::size_t>(m.rows()), std::vector<BigInt>(static_cast<std::size_t>(m.cols())));
  for (int r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
  return out;
}

inline Dense transpose(const Dense& m, std::size_t cols) {
  Dense out(cols, std::vector<BigInt>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c][r] = m[r][c];
  return out;
}

// Diagonalises by pivoting on the smallest entry, then turns the diagonal
// into invariant factors with the gcd/lcm exchange.
inline std::vector<BigInt> smith_diagonal(Dense a) {
  std::vector<BigInt> diag;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t r = t; r < rows; ++r)
      for (std::size_t c = t; c < cols; ++c)
        if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) pr = r, pc = c;
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = true;
    for (std::size_t r = t + 1; r < rows; ++r) {
      const BigInt q = a[r][t] / a[t][t];
      if (q != 0)
        for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
      if (a[r][t] != 0) clean = false;
    }
    for (std::size_t c = t + 1; c < cols; ++c) {
      const BigInt q = a[t][c] / a[t][t];
      if (q != 0)
        for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
      if (a[t][c] != 0) clean = false;
    }
    if (!clean) continue;  // a smaller remainder now exists; pivot again
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      const BigInt g = gcd(diag[i], diag[j]);
      const BigInt l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

inline int dense_rank(const Dense& m) { return static_cast<int>(smith_diagonal(m).size()); }

struct Group {
  int rank = 0;
  std::vector<BigInt> torsion;
  bool operator==(const Group&) const = default;
};

inline Group from_library(const gutscat::HomologyGroup& g) { return {g.rank, g.torsion}; }

// Z^generators / rowspan(relations).
inline Group cokernel(const Dense& relations, int generators) {
  Group g;
  const auto diag = relations.empty() ? std::vector<BigInt>{} : smith_diagonal(relations);
  g.rank = generators - static_cast<int>(diag.size());
  for (const auto& d : diag)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

// H_k of a chain complex given as dense boundary matrices (rows: C_{k-1}).
inline Group homology(int dim_k, const Dense& d_k, const Dense& d_k1, std::size_t d_k1_cols) {
  const int rk = d_k.empty() || d_k[0].empty() ? 0 : dense_rank(d_k);
  // Work on the transpose of d_{k+1}; invariant factors do not change.
  const auto diag = d_k1.empty() || d_k1_cols == 0 ? std::vector<BigInt>{} : smith_diagonal(transpose(d_k1, d_k1_cols));
  Group g;
  g.rank = dim_k - rk - static_cast<int>(diag.size());
  for (const auto& d : diag)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

// ---------------------------------------------------------------- triangulations

// Vertex classes by orbiting (tet, vertex) labels.
inline int vertex_orbits(const gutscat::Triangulation& tri) {
  const int n = 4 * tri.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      for (int v = 0; v < 4; ++v)
        if (v != f) parent[static_cast<std::size_t>(find(4 * t + v))] = find(4 * g->tet + g->perm[v]);
    }
  std::set<int> roots;
  for (int i = 0; i < n; ++i) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

// Tries all 2^t sign choices.
inline bool orientable_by_search(const gutscat::Triangulation& tri) {
  const int t = tri.size();
  for (std::uint32_t mask = 0; mask < (1u << t); ++mask) {
    const auto s = [&](int i) { return (mask >> i) & 1u ? -1 : 1; };
    bool ok = true;
    for (int i = 0; i < t && ok; ++i)
      for (int f = 0; f < 4 && ok; ++f) {
        const auto& g = tri.gluing(i, f);
        if (g && s(i) * s(g->tet) * g->perm.sign() != -1) ok = false;
      }
    if (ok) return true;
  }
  return false;
}

// ---------------------------------------------------------------- normal surfaces

// Arcs of the normal discs of tet `tet` on face f cutting off vertex v.
inline std::int64_t arcs(const std::vector<std::int64_t>& x, int tet, int f, int v) {
  // Quad type k pairs vertex 0 with vertex k+1.
  const auto quad_of_pair = [](int a, int b) {
    const int partner_of_0 = a == 0 ? b : b == 0 ? a : 6 - a - b;
    return partner_of_0 - 1;
  };
  return x[static_cast<std::size_t>(7 * tet + v)] + x[static_cast<std::size_t>(7 * tet + 4 + quad_of_pair(f, v))];
}

inline bool matching_holds(const gutscat::Triangulation& tri, const std::vector<std::int64_t>& x) {
  for (int t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      for (int v = 0; v < 4; ++v)
        if (v != f && arcs(x, t, f, v) != arcs(x, g->tet, g->perm[f], g->perm[v])) return false;
    }
  return true;
}

inline bool quads_ok(const std::vector<std::int64_t>& x) {
  for (std::size_t t = 0; t * 7 < x.size(); ++t) {
    int nz = 0;
    for (int k = 0; k < 3; ++k) nz += x[7 * t + 4 + static_cast<std::size_t>(k)] != 0;
    if (nz > 1) return false;
  }
  return true;
}

// Every vector in [0, bound]^{7t} that is admissible and has some triangle
// coordinate 0 (no vertex-linking summand), in lexicographic order.
inline std::vector<std::vector<std::int64_t>> brute_surfaces(const gutscat::Triangulation& tri, int bound) {
  const std::size_t n = 7 * static_cast<std::size_t>(tri.size());
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> x(n, 0);
  while (true) {
    if (quads_ok(x) && matching_holds(tri, x)) {
      std::int64_t least = x[0];
      for (int t = 0; t < tri.size(); ++t)
        for (int v = 0; v < 4; ++v) least = std::min(least, x[static_cast<std::size_t>(7 * t + v)]);
      if (least == 0) out.push_back(x);
    }
    std::size_t i = n;
    while (i > 0 && x[i - 1] == bound) x[--i] = 0;
    if (i == 0) break;
    ++x[i - 1];
  }
  return out;
}

// Euler characteristic read straight off the coordinates: discs, arcs
// (each shared by two faces) and points on edge classes.
inline std::int64_t euler_from_coords(const gutscat::Triangulation& tri, const std::vector<std::int64_t>& x) {
  const auto at = [&](int t, int i) { return x[static_cast<std::size_t>(7 * t + i)]; };
  const auto quad_cuts = [](int k, int a, int b) {
    const bool sa = a == 0 || a == k + 1, sb = b == 0 || b == k + 1;
    return sa != sb;
  };
  std::int64_t faces = 0, arc_sides = 0;
  for (int t = 0; t < tri.size(); ++t) {
    for (int i = 0; i < 7; ++i) faces += at(t, i);
    for (int f = 0; f < 4; ++f)
      for (int v = 0; v < 4; ++v)
        if (v != f) arc_sides += arcs(x, t, f, v);
  }
  // Edge classes by union-find over (tet, a, b).
  const int n = 16 * tri.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int e) {
    while (parent[static_cast<std::size_t>(e)] != e) e = parent[static_cast<std::size_t>(e)];
    return e;
  };
  const auto id = [](int t, int a, int b) { return 16 * t + 4 * std::min(a, b) + std::max(a, b); };
  for (int t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) continue;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          if (a != f && b != f) parent[static_cast<std::size_t>(find(id(t, a, b)))] = find(id(g->tet, g->perm[a], g->perm[b]));
    }
  std::map<int, std::int64_t> weight;
  for (int t = 0; t < tri.size(); ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        std::int64_t w = at(t, a) + at(t, b);
        for (int k = 0; k < 3; ++k)
          if (quad_cuts(k, a, b)) w += at(t, 4 + k);
        weight[find(id(t, a, b))] = w;
      }
  std::int64_t vertices = 0;
  for (const auto& [cls, w] : weight) vertices += w;
  return vertices - arc_sides / 2 + faces;
}

// ---------------------------------------------------------------- Seifert census

struct CensusKey {
  std::vector<std::int64_t> a, b;
  int sign = 0;
  auto operator<=>(const CensusKey&) const = default;
};

// All pairwise coprime tuples (n >= 3, each >= 2) with product <= limit and
// chi(B) < 0, found by splitting the prime-power factors of every N <= limit
// into groups; b_i by direct search.
inline std::set<CensusKey> brute_census(std::int64_t limit) {
  std::set<CensusKey> out;
  for (std::int64_t n = 2; n <= limit; ++n) {
    std::vector<std::int64_t> powers;
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        std::int64_t q = 1;
        while (m % p == 0) m /= p, q *= p;
        powers.push_back(q);
      }
    if (m > 1) powers.push_back(m);
    const std::size_t k = powers.size();
    if (k < 3) continue;
    // Assign each prime power a group label (restricted growth strings).
    std::vector<int> label(k, 0);
    std::set<std::vector<std::int64_t>> tuples;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
      if (i == k) {
        if (used < 3) return;
        std::vector<std::int64_t> a(static_cast<std::size_t>(used), 1);
        for (std::size_t j = 0; j < k; ++j) a[static_cast<std::size_t>(label[j])] *= powers[j];
        std::sort(a.begin(), a.end());
        tuples.insert(a);
        return;
      }
      for (int g = 0; g <= used; ++g) {
        label[i] = g;
        rec(i + 1, std::max(used, g + 1));
      }
    };
    rec(0, 0);
    for (const auto& a : tuples) {
      Rational chi = 2;
      for (auto x : a) chi -= 1 - Rational(1, x);
      if (chi >= 0) continue;
      for (int sign : {-1, 1}) {
        CensusKey key{a, {}, sign};
        for (auto ai : a) {
          const std::int64_t rest = n / ai;
          for (std::int64_t b = 1; b < ai; ++b)
            if ((((b * (rest % ai)) % ai) + sign + ai) % ai == 0) {
              key.b.push_back(b);
              break;
            }
        }
        out.insert(key);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- JSJ trees

// Presentation of H_1 of a tree: vertex relations, then for every edge and
// each basis curve x of V's torus, x_V = (image of x in W's basis).
inline Group tree_h1(const gutscat::JSJTree& t) {
  std::vector<int> offset;
  int gens = 0;
  for (const auto& v : t.vertices) {
    offset.push_back(gens);
    gens += v.generators;
  }
  Dense rows;
  for (std::size_t i = 0; i < t.vertices.size(); ++i)
    for (const auto& rel : t.vertices[i].relations) {
      std::vector<BigInt> row(static_cast<std::size_t>(gens));
      for (std::size_t g = 0; g < rel.size(); ++g) row[static_cast<std::size_t>(offset[i]) + g] = rel[g];
      rows.push_back(row);
    }
  for (const auto& e : t.edges) {
    const auto& tv = t.vertices[static_cast<std::size_t>(e.v)].tori[static_cast<std::size_t>(e.v_torus)];
    const auto& tw = t.vertices[static_cast<std::size_t>(e.w)].tori[static_cast<std::size_t>(e.w_torus)];
    for (int col = 0; col < 2; ++col) {
      std::vector<BigInt> row(static_cast<std::size_t>(gens));
      const auto& x = col == 0 ? tv.mu : tv.lambda;
      for (std::size_t g = 0; g < x.size(); ++g) row[static_cast<std::size_t>(offset[static_cast<std::size_t>(e.v)]) + g] += x[g];
      for (std::size_t g = 0; g < tw.mu.size(); ++g) {
        const std::size_t at = static_cast<std::size_t>(offset[static_cast<std::size_t>(e.w)]) + g;
        row[at] -= BigInt(e.matrix.at(0, col)) * tw.mu[g] + BigInt(e.matrix.at(1, col)) * tw.lambda[g];
      }
      rows.push_back(row);
    }
  }
  return cokernel(rows, gens);
}

}  // namespace oracle
