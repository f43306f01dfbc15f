#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gutscat/smith.hpp"

namespace gutscat {

/// Columns are the images of mu_V and lambda_V in the (mu_W, lambda_W)
/// basis. Entries must have determinant +1 or -1.
class GluingMatrix {
 public:
  GluingMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  std::int64_t at(int r, int c) const { return m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  std::int64_t det() const;
  /// The image of x * mu + y * lambda.
  std::array<std::int64_t, 2> apply(std::array<std::int64_t, 2> v) const;
  GluingMatrix inverse() const;
  std::string str() const;
  bool operator==(const GluingMatrix&) const = default;

 private:
  std::array<std::array<std::int64_t, 2>, 2> m_;
};

/// phi(mu_V) = p mu_W + eps lambda_W, phi(lambda_V) = eps(pq+1) mu_W + q lambda_W.
GluingMatrix gluing_matrix(std::int64_t p, std::int64_t q, int eps);

struct GluingParams {
  std::int64_t p = 0, q = 0;
  int eps = 1;
  bool operator==(const GluingParams&) const = default;
};

/// Inverts gluing_matrix; throws DomainError for matrices not of that form.
GluingParams extract_pq(const GluingMatrix& m);

/// phi(mu_V) = lambda_W, phi(lambda_V) = -mu_W + q lambda_W.
GluingMatrix knot_gluing_matrix(std::int64_t q);

/// Algebraic intersection number of two classes on a torus with mu.lambda = 1.
std::int64_t intersection(std::array<std::int64_t, 2> x, std::array<std::int64_t, 2> y);

/// H_1 data of a piece with torus boundary components: Z^generators
/// modulo the relation rows, and per torus the classes of mu and lambda.
struct TorusBoundary {
  std::vector<std::int64_t> mu, lambda;
};

struct VertexDescriptor {
  int generators = 0;
  std::vector<std::vector<std::int64_t>> relations;
  std::vector<TorusBoundary> tori;

  HomologyGroup homology() const;
  /// Every mu null-homologous and the lambdas a basis of H_1 (a free group
  /// of rank #tori). Empty when both hold.
  std::vector<std::string> violations() const;
};

/// Z^k with torus i having mu_i = 0 and lambda_i = e_i. With k = 1 this
/// is the homology of a solid torus whose meridian is mu.
VertexDescriptor standard_vertex(int tori = 1);

/// H_1 after Dehn filling torus `torus` along s_mu mu + s_lambda lambda.
HomologyGroup fill_homology(const VertexDescriptor& v, std::array<std::int64_t, 2> slope, int torus = 0);

/// The slope on V's torus glued to mu_W by m, i.e. m^-1 (1, 0).
std::array<std::int64_t, 2> filling_slope(const GluingMatrix& m);

struct TreeEdge {
  int v = -1, v_torus = 0;
  int w = -1, w_torus = 0;
  GluingMatrix matrix{0, 1, 1, 0};
};

struct JSJTree {
  std::vector<VertexDescriptor> vertices;
  std::vector<TreeEdge> edges;
};

struct TreeHomology {
  HomologyGroup h1;
  bool homology_sphere = false;
};

/// Mayer-Vietoris assembly of H_1. Throws DomainError on cycles, a
/// disconnected graph, a torus glued twice, an invalid vertex, or an
/// unglued torus ("open boundary remains").
TreeHomology assemble_tree(const JSJTree& t);

/// Text form: see docs/tree_format.md.
JSJTree parse_tree(const std::string& text);
JSJTree load_tree(const std::string& path);
std::string serialize(const JSJTree& t);

struct GraphBounds {
  int h = 0;
  int vertices = 0, edges = 0;
  bool edges_ok = false;     // edges <= h
  bool vertices_ok = false;  // vertices <= h + 1
  bool pass() const { return edges_ok && vertices_ok; }
};

GraphBounds graph_bounds(int h_m, int vertices, int edges);
GraphBounds graph_bounds(int h_m, const JSJTree& t);

}  // namespace gutscat
