#pragma once

// Random JSJ trees whose edges are all of the (p, q, eps) form, for the gluing tests
// and the acceptance run.

#include <algorithm>
#include <random>
#include <vector>

#include "gutscat/jsj_gluing.hpp"

namespace gutscat::testing {

// A homology solid-torus-like vertex with k tori, disguised: one extra
// generator killed by a relation, mu a multiple of that relation, and a
// random unimodular change of generators.
inline VertexDescriptor disguised_vertex(int k, std::mt19937& rng) {
  const int g = k + 1;
  std::uniform_int_distribution<int> small(-2, 2);
  std::vector<std::int64_t> rel(static_cast<std::size_t>(g), 0);
  rel[static_cast<std::size_t>(k)] = 1;
  for (int i = 0; i < k; ++i) rel[static_cast<std::size_t>(i)] = small(rng);
  VertexDescriptor v;
  v.generators = g;
  v.relations = {rel};
  for (int i = 0; i < k; ++i) {
    TorusBoundary t;
    const int c = small(rng), d = small(rng);
    t.mu.resize(static_cast<std::size_t>(g));
    t.lambda.resize(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) {
      t.mu[static_cast<std::size_t>(j)] = c * rel[static_cast<std::size_t>(j)];
      t.lambda[static_cast<std::size_t>(j)] = (j == i) + d * rel[static_cast<std::size_t>(j)];
    }
    v.tori.push_back(t);
  }
  // Column operations x_a += m * x_b on every vector.
  for (int step = 0; step < 6; ++step) {
    const int a = static_cast<int>(rng() % static_cast<unsigned>(g));
    const int b = static_cast<int>(rng() % static_cast<unsigned>(g));
    if (a == b) continue;
    const int m = small(rng);
    const auto op = [&](std::vector<std::int64_t>& x) { x[static_cast<std::size_t>(a)] += m * x[static_cast<std::size_t>(b)]; };
    for (auto& r : v.relations) op(r);
    for (auto& t : v.tori) op(t.mu), op(t.lambda);
  }
  return v;
}

// A random tree with (p, q, eps) gluings on two to six vertices.
inline JSJTree random_tree(std::mt19937& rng) {
  const int n = 2 + static_cast<int>(rng() % 5);
  std::vector<int> parent(static_cast<std::size_t>(n), -1), degree(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) {
    parent[static_cast<std::size_t>(i)] = static_cast<int>(rng() % static_cast<unsigned>(i));
    ++degree[static_cast<std::size_t>(i)];
    ++degree[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
  }
  JSJTree t;
  std::vector<int> next_torus(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int k = std::max(degree[static_cast<std::size_t>(i)], 1);
    t.vertices.push_back(rng() % 2 ? standard_vertex(k) : disguised_vertex(k, rng));
  }
  std::uniform_int_distribution<int> pq(-20, 20);
  for (int i = 1; i < n; ++i) {
    const int w = parent[static_cast<std::size_t>(i)];
    TreeEdge e;
    e.v = i;
    e.v_torus = next_torus[static_cast<std::size_t>(i)]++;
    e.w = w;
    e.w_torus = next_torus[static_cast<std::size_t>(w)]++;
    e.matrix = gluing_matrix(pq(rng), pq(rng), rng() % 2 ? 1 : -1);
    t.edges.push_back(e);
  }
  return t;
}

}  // namespace gutscat::testing
