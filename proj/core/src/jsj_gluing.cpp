#include "gutscat/jsj_gluing.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "gutscat/error.hpp"
#include "gutscat/exact.hpp"
#include "union_find.hpp"

namespace gutscat {

using detail::UnionFind;

GluingMatrix::GluingMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : m_{{{a, b}, {c, d}}} {
  const std::int64_t dt = det();
  if (dt != 1 && dt != -1) throw DomainError("gluing matrix " + str() + " has determinant " + std::to_string(dt));
}

std::int64_t GluingMatrix::det() const {
  return checked_add(checked_mul(m_[0][0], m_[1][1]), -checked_mul(m_[0][1], m_[1][0]));
}

std::array<std::int64_t, 2> GluingMatrix::apply(std::array<std::int64_t, 2> v) const {
  return {checked_add(checked_mul(m_[0][0], v[0]), checked_mul(m_[0][1], v[1])),
          checked_add(checked_mul(m_[1][0], v[0]), checked_mul(m_[1][1], v[1]))};
}

GluingMatrix GluingMatrix::inverse() const {
  const std::int64_t d = det();
  return {d * m_[1][1], -d * m_[0][1], -d * m_[1][0], d * m_[0][0]};
}

std::string GluingMatrix::str() const {
  return "[[" + std::to_string(m_[0][0]) + "," + std::to_string(m_[0][1]) + "],[" + std::to_string(m_[1][0]) + "," +
         std::to_string(m_[1][1]) + "]]";
}

GluingMatrix gluing_matrix(std::int64_t p, std::int64_t q, int eps) {
  if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
  return {p, eps * checked_add(checked_mul(p, q), 1), eps, q};
}

std::int64_t intersection(std::array<std::int64_t, 2> x, std::array<std::int64_t, 2> y) {
  return checked_add(checked_mul(x[0], y[1]), -checked_mul(x[1], y[0]));
}

GluingParams extract_pq(const GluingMatrix& m) {
  if (m.det() != -1) throw DomainError("matrix " + m.str() + " has determinant " + std::to_string(m.det()) + ", not -1");
  const std::int64_t eps = m.at(1, 0);
  if (eps != 1 && eps != -1) throw DomainError("matrix " + m.str() + " has lower-left entry outside {-1, 1}");
  GluingParams out{m.at(0, 0), m.at(1, 1), static_cast<int>(eps)};
  if (!(gluing_matrix(out.p, out.q, out.eps) == m)) throw InternalError("extract_pq does not round-trip");
  // |p| = D(phi mu_V, lambda_W), |q| = D(phi^-1 mu_W, lambda_V).
  const auto abs64 = [](std::int64_t x) { return x < 0 ? -x : x; };
  if (abs64(intersection(m.apply({1, 0}), {0, 1})) != abs64(out.p) ||
      abs64(intersection(m.inverse().apply({1, 0}), {0, 1})) != abs64(out.q))
    throw InternalError("intersection numbers disagree with p and q");
  return out;
}

GluingMatrix knot_gluing_matrix(std::int64_t q) { return {0, -1, 1, q}; }

namespace {

SparseMatrix relation_matrix(int generators, const std::vector<std::vector<std::int64_t>>& rows) {
  SparseMatrix m(0, generators);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != generators) throw DomainError("relation has the wrong number of entries");
    const int r = m.add_row();
    for (int c = 0; c < generators; ++c)
      if (row[static_cast<std::size_t>(c)] != 0) m.add(r, c, row[static_cast<std::size_t>(c)]);
  }
  return m;
}

}  // namespace

HomologyGroup VertexDescriptor::homology() const { return cokernel(relation_matrix(generators, relations)); }

std::vector<std::string> VertexDescriptor::violations() const {
  std::vector<std::string> out;
  if (generators < 0) return {"negative generator count"};
  for (const auto& t : tori)
    if (static_cast<int>(t.mu.size()) != generators || static_cast<int>(t.lambda.size()) != generators)
      return {"boundary class has the wrong number of entries"};
  const auto h = homology();
  if (!h.torsion.empty() || h.rank != static_cast<int>(tori.size()))
    out.push_back("H_1 = " + h.str() + ", expected Z^" + std::to_string(tori.size()));
  for (std::size_t i = 0; i < tori.size(); ++i) {
    auto rows = relations;
    rows.push_back(tori[i].mu);
    if (!(cokernel(relation_matrix(generators, rows)) == h))
      out.push_back("mu of torus " + std::to_string(i) + " is not null-homologous");
  }
  auto rows = relations;
  for (const auto& t : tori) rows.push_back(t.lambda);
  if (!cokernel(relation_matrix(generators, rows)).trivial()) out.push_back("the lambdas do not generate H_1");
  return out;
}

VertexDescriptor standard_vertex(int tori) {
  if (tori < 0) throw DomainError("negative torus count");
  VertexDescriptor v;
  v.generators = tori;
  for (int i = 0; i < tori; ++i) {
    TorusBoundary t;
    t.mu.assign(static_cast<std::size_t>(tori), 0);
    t.lambda.assign(static_cast<std::size_t>(tori), 0);
    t.lambda[static_cast<std::size_t>(i)] = 1;
    v.tori.push_back(std::move(t));
  }
  return v;
}

HomologyGroup fill_homology(const VertexDescriptor& v, std::array<std::int64_t, 2> slope, int torus) {
  if (std::gcd(slope[0], slope[1]) != 1)
    throw DomainError("slope (" + std::to_string(slope[0]) + ", " + std::to_string(slope[1]) + ") is not primitive");
  if (torus < 0 || torus >= static_cast<int>(v.tori.size())) throw DomainError("no boundary torus " + std::to_string(torus));
  const auto& t = v.tori[static_cast<std::size_t>(torus)];
  auto rows = v.relations;
  std::vector<std::int64_t> rel(static_cast<std::size_t>(v.generators));
  for (int g = 0; g < v.generators; ++g)
    rel[static_cast<std::size_t>(g)] = checked_add(checked_mul(slope[0], t.mu[static_cast<std::size_t>(g)]),
                                                   checked_mul(slope[1], t.lambda[static_cast<std::size_t>(g)]));
  rows.push_back(std::move(rel));
  return cokernel(relation_matrix(v.generators, rows));
}

std::array<std::int64_t, 2> filling_slope(const GluingMatrix& m) { return m.inverse().apply({1, 0}); }

TreeHomology assemble_tree(const JSJTree& t) {
  const int nv = static_cast<int>(t.vertices.size());
  if (nv == 0) throw DomainError("tree has no vertices");
  for (int i = 0; i < nv; ++i)
    if (const auto bad = t.vertices[static_cast<std::size_t>(i)].violations(); !bad.empty())
      throw DomainError("vertex " + std::to_string(i) + ": " + bad.front());
  UnionFind uf(static_cast<std::size_t>(nv));
  std::set<std::pair<int, int>> used;
  for (const auto& e : t.edges) {
    for (auto [v, k] : {std::pair{e.v, e.v_torus}, std::pair{e.w, e.w_torus}}) {
      if (v < 0 || v >= nv) throw DomainError("edge names vertex " + std::to_string(v));
      if (k < 0 || k >= static_cast<int>(t.vertices[static_cast<std::size_t>(v)].tori.size()))
        throw DomainError("edge names torus " + std::to_string(k) + " of vertex " + std::to_string(v));
      if (!used.insert({v, k}).second)
        throw DomainError("torus " + std::to_string(k) + " of vertex " + std::to_string(v) + " is glued twice");
    }
    if (uf.find(static_cast<std::size_t>(e.v)) == uf.find(static_cast<std::size_t>(e.w)))
      throw DomainError("graph is not a tree: cycle detected");
    uf.unite(static_cast<std::size_t>(e.v), static_cast<std::size_t>(e.w));
  }
  if (static_cast<int>(t.edges.size()) != nv - 1) throw DomainError("graph is not connected");
  for (int v = 0; v < nv; ++v)
    for (int k = 0; k < static_cast<int>(t.vertices[static_cast<std::size_t>(v)].tori.size()); ++k)
      if (!used.count({v, k}))
        throw DomainError("open boundary remains: torus " + std::to_string(k) + " of vertex " + std::to_string(v));

  std::vector<int> offset;
  int total = 0;
  for (const auto& v : t.vertices) {
    offset.push_back(total);
    total += v.generators;
  }
  SparseMatrix rel(0, total);
  for (int i = 0; i < nv; ++i) {
    const auto& v = t.vertices[static_cast<std::size_t>(i)];
    for (const auto& row : v.relations) {
      const int r = rel.add_row();
      for (int g = 0; g < v.generators; ++g)
        if (row[static_cast<std::size_t>(g)] != 0) rel.add(r, offset[static_cast<std::size_t>(i)] + g, row[static_cast<std::size_t>(g)]);
    }
  }
  // x on V's torus equals phi(x) on W's torus, for x = mu, lambda.
  for (const auto& e : t.edges) {
    const auto& tv = t.vertices[static_cast<std::size_t>(e.v)].tori[static_cast<std::size_t>(e.v_torus)];
    const auto& tw = t.vertices[static_cast<std::size_t>(e.w)].tori[static_cast<std::size_t>(e.w_torus)];
    const int gv = t.vertices[static_cast<std::size_t>(e.v)].generators;
    const int gw = t.vertices[static_cast<std::size_t>(e.w)].generators;
    for (int col = 0; col < 2; ++col) {
      const int r = rel.add_row();
      const auto& x = col == 0 ? tv.mu : tv.lambda;
      for (int g = 0; g < gv; ++g) rel.add(r, offset[static_cast<std::size_t>(e.v)] + g, x[static_cast<std::size_t>(g)]);
      const std::int64_t a = e.matrix.at(0, col), b = e.matrix.at(1, col);
      for (int g = 0; g < gw; ++g)
        rel.add(r, offset[static_cast<std::size_t>(e.w)] + g,
                -checked_add(checked_mul(a, tw.mu[static_cast<std::size_t>(g)]), checked_mul(b, tw.lambda[static_cast<std::size_t>(g)])));
    }
  }
  TreeHomology out;
  out.h1 = cokernel(rel);
  out.homology_sphere = out.h1.trivial();
  return out;
}

namespace {

// Whitespace tokens with '#' comments stripped.
class Tokens {
 public:
  explicit Tokens(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks_.push_back(tok);
    }
  }
  bool done() const { return i_ >= toks_.size(); }
  std::string word() {
    if (done()) throw DomainError("tree file ends early");
    return toks_[i_++];
  }
  void expect(const std::string& w) {
    const auto got = word();
    if (got != w) throw DomainError("tree file: expected '" + w + "', got '" + got + "'");
  }
  std::int64_t integer() {
    const auto w = word();
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || w.empty()) throw DomainError("tree file: '" + w + "' is not an integer");
    return v;
  }
  int count() {
    const auto v = integer();
    if (v < 0 || v > 100000) throw DomainError("tree file: count out of range");
    return static_cast<int>(v);
  }

 private:
  std::vector<std::string> toks_;
  std::size_t i_ = 0;
};

std::vector<std::int64_t> read_row(Tokens& tk, int n) {
  std::vector<std::int64_t> row;
  for (int i = 0; i < n; ++i) row.push_back(tk.integer());
  return row;
}

void write_row(std::ostringstream& out, const std::vector<std::int64_t>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
}

}  // namespace

JSJTree parse_tree(const std::string& text) {
  Tokens tk(text);
  JSJTree t;
  tk.expect("vertices");
  const int nv = tk.count();
  for (int i = 0; i < nv; ++i) {
    const auto kind = tk.word();
    if (kind == "standard") {
      t.vertices.push_back(standard_vertex(tk.count()));
      continue;
    }
    if (kind != "vertex") throw DomainError("tree file: expected 'vertex' or 'standard', got '" + kind + "'");
    VertexDescriptor v;
    v.generators = tk.count();
    const int nr = tk.count();
    const int nt = tk.count();
    for (int r = 0; r < nr; ++r) {
      tk.expect("rel");
      v.relations.push_back(read_row(tk, v.generators));
    }
    for (int k = 0; k < nt; ++k) {
      tk.expect("torus");
      TorusBoundary b;
      b.mu = read_row(tk, v.generators);
      b.lambda = read_row(tk, v.generators);
      v.tori.push_back(std::move(b));
    }
    t.vertices.push_back(std::move(v));
  }
  tk.expect("edges");
  const int ne = tk.count();
  for (int i = 0; i < ne; ++i) {
    tk.expect("edge");
    TreeEdge e;
    e.v = static_cast<int>(tk.integer());
    e.v_torus = static_cast<int>(tk.integer());
    e.w = static_cast<int>(tk.integer());
    e.w_torus = static_cast<int>(tk.integer());
    const auto a = tk.integer(), b = tk.integer(), c = tk.integer(), d = tk.integer();
    e.matrix = GluingMatrix(a, b, c, d);
    t.edges.push_back(e);
  }
  if (!tk.done()) throw DomainError("tree file: trailing tokens");
  return t;
}

JSJTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tree(ss.str());
}

std::string serialize(const JSJTree& t) {
  std::ostringstream out;
  out << "vertices " << t.vertices.size() << "\n";
  for (const auto& v : t.vertices) {
    out << "vertex " << v.generators << " " << v.relations.size() << " " << v.tori.size() << "\n";
    for (const auto& r : v.relations) {
      out << "  rel ";
      write_row(out, r);
      out << "\n";
    }
    for (const auto& b : v.tori) {
      out << "  torus ";
      write_row(out, b.mu);
      out << "  ";
      write_row(out, b.lambda);
      out << "\n";
    }
  }
  out << "edges " << t.edges.size() << "\n";
  for (const auto& e : t.edges)
    out << "edge " << e.v << " " << e.v_torus << " " << e.w << " " << e.w_torus << " " << e.matrix.at(0, 0) << " "
        << e.matrix.at(0, 1) << " " << e.matrix.at(1, 0) << " " << e.matrix.at(1, 1) << "\n";
  return out.str();
}

GraphBounds graph_bounds(int h_m, int vertices, int edges) {
  if (h_m < 0) throw DomainError("Haken number must be non-negative");
  GraphBounds g;
  g.h = h_m;
  g.vertices = vertices;
  g.edges = edges;
  g.edges_ok = edges <= h_m;
  g.vertices_ok = vertices <= h_m + 1;
  return g;
}

GraphBounds graph_bounds(int h_m, const JSJTree& t) {
  return graph_bounds(h_m, static_cast<int>(t.vertices.size()), static_cast<int>(t.edges.size()));
}

}  // namespace gutscat
