#pragma once

#include <array>
#include <utility>

namespace gutscat::tetra {

// Edge e joins kEdgeVertices[e].first < kEdgeVertices[e].second.
inline constexpr std::array<std::pair<int, int>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b - 1;
  if (a == 1) return b + 1;
  return 5;
}

// Quad type k separates {0, partner} from the other two vertices:
// k=0 is {01|23}, k=1 is {02|13}, k=2 is {03|12}.
inline constexpr int kQuadTypes = 3;

/// The vertex paired with v by quad type k.
constexpr int quad_partner(int k, int v) {
  constexpr int table[3][4] = {{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  return table[k][v];
}

/// The quad type that pairs a with b.
constexpr int quad_type_pairing(int a, int b) {
  for (int k = 0; k < 3; ++k)
    if (quad_partner(k, a) == b) return k;
  return -1;
}

/// True when vertex v lies on the side of quad type k that contains vertex 0.
constexpr bool quad_side_zero(int k, int v) { return v == 0 || v == quad_partner(k, 0); }

/// Whether quad type k separates a from b.
constexpr bool quad_separates(int k, int a, int b) { return quad_partner(k, a) != b && a != b; }

/// The other two vertices of face f (opposite vertex f), other than c.
constexpr std::pair<int, int> face_others(int f, int c) {
  int x = -1, y = -1;
  for (int v = 0; v < 4; ++v) {
    if (v == f || v == c) continue;
    if (x < 0) x = v; else y = v;
  }
  return {x, y};
}

}  // namespace gutscat::tetra
