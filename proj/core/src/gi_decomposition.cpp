#include "gutscat/gi_decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "gutscat/collapse.hpp"
#include "gutscat/error.hpp"
#include "union_find.hpp"

namespace gutscat {

using detail::ParityUF;
using detail::UnionFind;

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Guts: return "guts";
    case NodeKind::IBundle: return "ibundle";
    case NodeKind::PseudoGuts: return "pseudo-guts";
    case NodeKind::PseudoIBundle: return "pseudo-ibundle";
  }
  return "?";
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::FirstApprox: return "first-approx";
    case Stage::Absorbed: return "absorbed";
    case Stage::BallPlugged: return "ball-plugged";
  }
  return "?";
}

const char* to_string(TinyType t) {
  switch (t) {
    case TinyType::I: return "i";
    case TinyType::II: return "ii";
    case TinyType::III: return "iii";
    case TinyType::Unknown: return "unknown";
  }
  return "?";
}

int GIDecomposition::node_of(int cell) const {
  for (std::size_t n = 0; n < nodes.size(); ++n)
    if (std::binary_search(nodes[n].cells.begin(), nodes[n].cells.end(), cell)) return static_cast<int>(n);
  return -1;
}

std::optional<std::pair<int, int>> GIDecomposition::annulus_at(FaceRef f) const {
  for (const auto& a : annuli)
    for (int s = 0; s < 2; ++s)
      if (std::find(a.sides[static_cast<std::size_t>(s)].faces.begin(), a.sides[static_cast<std::size_t>(s)].faces.end(), f) !=
          a.sides[static_cast<std::size_t>(s)].faces.end())
        return std::make_pair(a.id, s);
  return std::nullopt;
}

const FrontierAnnulus& GIDecomposition::annulus(int id) const {
  for (const auto& a : annuli)
    if (a.id == id) return a;
  throw InternalError("no active annulus with id " + std::to_string(id));
}

namespace {

std::vector<int> all_cells(const PolyComplex& pc) {
  std::vector<int> out(pc.cells().size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> union_cells(const GIDecomposition& d, const std::vector<int>& nodes) {
  std::vector<int> cells;
  for (int n : nodes) {
    const auto& c = d.nodes[static_cast<std::size_t>(n)].cells;
    cells.insert(cells.end(), c.begin(), c.end());
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace

GIDecomposition assemble_nodes(PolyComplex complex, std::vector<int> cell_tag, const std::vector<int>& node_of_cell,
                               const std::vector<NodeKind>& kinds) {
  GIDecomposition d;
  d.complex = std::move(complex);
  d.cell_tag = std::move(cell_tag);
  const int ncells = static_cast<int>(d.complex.cells().size());
  if (static_cast<int>(node_of_cell.size()) != ncells || static_cast<int>(d.cell_tag.size()) != ncells)
    throw InternalError("node labelling does not cover the cells");
  d.nodes.resize(kinds.size());
  for (std::size_t n = 0; n < kinds.size(); ++n) d.nodes[n].kind = kinds[n];
  for (int c = 0; c < ncells; ++c) d.nodes[static_cast<std::size_t>(node_of_cell[static_cast<std::size_t>(c)])].cells.push_back(c);

  // Frontier 2-cells of M_* \ S, grouped into annuli through shared edges.
  // Edges are taken with the frontier gluings left open and on the
  // I-bundle side, where the vertical boundary is a surface; guts sides may
  // pinch two annuli together along a fibre.
  const CellQuotient q(d.complex, {all_cells(d.complex), [](const PolyGluing& g) { return g.kind != GlueKind::Frontier; }, {}});
  std::vector<int> frontier;
  for (int g = 0; g < static_cast<int>(d.complex.gluings().size()); ++g) {
    const auto& gl = d.complex.gluing(g);
    if (gl.kind != GlueKind::Frontier) continue;
    if (node_of_cell[static_cast<std::size_t>(gl.a.cell)] == node_of_cell[static_cast<std::size_t>(gl.b.cell)])
      throw InternalError("frontier gluing inside a node");
    frontier.push_back(g);
  }
  const auto kind_of = [&](int cell) { return kinds[static_cast<std::size_t>(node_of_cell[static_cast<std::size_t>(cell)])]; };
  const auto chosen_sides = [&](const PolyGluing& gl) {
    const bool ga = guts_family(kind_of(gl.a.cell)), gb = guts_family(kind_of(gl.b.cell));
    std::vector<FaceRef> out;
    if (!ga || ga == gb) out.push_back(gl.a);
    if (!gb || ga == gb) out.push_back(gl.b);
    return out;
  };
  // A vertical boundary component of an I-bundle node may touch several
  // guts nodes when the surface compresses; it is split per node pair.
  UnionFind uf(frontier.size());
  std::map<std::array<int, 3>, std::size_t> by_edge;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const auto& gl = d.complex.gluing(frontier[i]);
    const int na = node_of_cell[static_cast<std::size_t>(gl.a.cell)], nb = node_of_cell[static_cast<std::size_t>(gl.b.cell)];
    for (const FaceRef f : chosen_sides(gl))
      for (int e : q.chains().occ[2][static_cast<std::size_t>(q.face_of(f).first)]) {
        auto [it, fresh] = by_edge.emplace(std::array<int, 3>{e, std::min(na, nb), std::max(na, nb)}, i);
        if (!fresh) uf.unite(i, it->second);
      }
  }
  std::map<std::size_t, int> group;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const std::size_t r = uf.find(i);
    auto [it, fresh] = group.emplace(r, static_cast<int>(d.annuli.size()));
    if (fresh) {
      d.annuli.emplace_back();
      d.annuli.back().id = it->second;
    }
    auto& ann = d.annuli[static_cast<std::size_t>(it->second)];
    const auto& gl = d.complex.gluing(frontier[i]);
    int na = node_of_cell[static_cast<std::size_t>(gl.a.cell)], nb = node_of_cell[static_cast<std::size_t>(gl.b.cell)];
    FaceRef fa = gl.a, fb = gl.b;
    if (na > nb) {
      std::swap(na, nb);
      std::swap(fa, fb);
    }
    if (ann.gluings.empty()) {
      ann.sides[0].node = na;
      ann.sides[1].node = nb;
    } else if (ann.sides[0].node != na || ann.sides[1].node != nb) {
      throw InternalError("frontier annulus joins more than two nodes");
    }
    ann.gluings.push_back(frontier[i]);
    ann.sides[0].faces.push_back(fa);
    ann.sides[1].faces.push_back(fb);
  }
  for (auto& ann : d.annuli) {
    const bool guts0 = guts_family(kinds[static_cast<std::size_t>(ann.sides[0].node)]);
    const bool guts1 = guts_family(kinds[static_cast<std::size_t>(ann.sides[1].node)]);
    const auto& side = guts0 && !guts1 ? ann.sides[1] : ann.sides[0];
    std::vector<int> cells2;
    for (const FaceRef f : side.faces) cells2.push_back(q.face_of(f).first);
    ann.euler_char = surface_euler_char(q, cells2);
    ann.boundary_circles = static_cast<int>(boundary_circles(q, cells2).size());
    std::sort(ann.sides[0].faces.begin(), ann.sides[0].faces.end());
    std::sort(ann.sides[1].faces.begin(), ann.sides[1].faces.end());
  }
  d.stage = Stage::FirstApprox;
  return d;
}

GIDecomposition assemble_first(const CutComplex& cc) {
  const int n = static_cast<int>(cc.pieces.size());
  UnionFind uf(static_cast<std::size_t>(n));
  for (const auto& g : cc.complex.gluings())
    if (g.kind != GlueKind::Frontier) {
      const bool pa = cc.pieces[static_cast<std::size_t>(g.a.cell)].kind == PieceKind::ProductBlock;
      const bool pb = cc.pieces[static_cast<std::size_t>(g.b.cell)].kind == PieceKind::ProductBlock;
      if (pa != pb) throw InternalError("non-frontier gluing between a product block and a non-product piece");
      uf.unite(static_cast<std::size_t>(g.a.cell), static_cast<std::size_t>(g.b.cell));
    }
  std::vector<int> node_of_cell(static_cast<std::size_t>(n));
  std::vector<NodeKind> kinds;
  std::map<std::size_t, int> id;
  for (int c = 0; c < n; ++c) {
    auto [it, fresh] = id.emplace(uf.find(static_cast<std::size_t>(c)), static_cast<int>(kinds.size()));
    if (fresh)
      kinds.push_back(cc.pieces[static_cast<std::size_t>(c)].kind == PieceKind::ProductBlock ? NodeKind::IBundle
                                                                                              : NodeKind::Guts);
    node_of_cell[static_cast<std::size_t>(c)] = it->second;
  }
  std::vector<int> tags;
  for (const auto& p : cc.pieces) tags.push_back(static_cast<int>(p.kind));
  return assemble_nodes(cc.complex, std::move(tags), node_of_cell, kinds);
}

CellQuotient PatternedManifold::quotient() const {
  QuotientSpec spec{all_cells(complex), {}, {}};
  if (sv_capped) {
    std::vector<FaceRef> sv;
    for (int c = 0; c < static_cast<int>(complex.cells().size()); ++c)
      for (int f = 0; f < static_cast<int>(complex.cell(c).faces.size()); ++f)
        if (complex.cell(c).faces[static_cast<std::size_t>(f)].cls == FaceClass::DiscSv && complex.gluing_at({c, f}) < 0)
          sv.push_back({c, f});
    if (!sv.empty()) spec.caps.push_back(std::move(sv));
  }
  return CellQuotient(complex, std::move(spec));
}

std::vector<BoundaryComponent> PatternedManifold::boundary() const {
  const auto q = quotient();
  return boundary_inventory(q, [&](FaceRef f) {
    const auto it = pattern.find(f);
    return it == pattern.end() ? -1 : it->second;
  });
}

HomologyGroup PatternedManifold::homology(int k) const { return quotient().chains().homology(k); }

std::vector<std::vector<int>> PatternedManifold::annulus_cells(const CellQuotient& q) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(annulus_count));
  for (const auto& [f, label] : pattern) out[static_cast<std::size_t>(label)].push_back(q.face_of(f).first);
  return out;
}

PatternedManifold extract(const GIDecomposition& d, const std::vector<int>& cells, const std::vector<int>& pattern_annuli,
                          NodeKind kind, bool sv_capped) {
  PatternedManifold p;
  p.kind = kind;
  p.sv_capped = sv_capped;
  p.source_cells = cells;
  std::sort(p.source_cells.begin(), p.source_cells.end());
  std::map<int, int> local;
  for (int c : p.source_cells) {
    local[c] = p.complex.add_cell(d.complex.cell(c));
    p.cell_tag.push_back(d.cell_tag[static_cast<std::size_t>(c)]);
  }
  std::set<int> open_gluings;
  std::vector<int> sorted_pattern = pattern_annuli;
  std::sort(sorted_pattern.begin(), sorted_pattern.end());
  for (int id : sorted_pattern) {
    const auto& a = d.annulus(id);
    open_gluings.insert(a.gluings.begin(), a.gluings.end());
    for (const auto& side : a.sides) {
      if (side.faces.empty() || !local.count(side.faces.front().cell)) continue;
      const int label = p.annulus_count++;
      for (const auto& f : side.faces) {
        if (!local.count(f.cell)) throw InternalError("annulus side split across pieces");
        p.pattern[{local.at(f.cell), f.face}] = label;
      }
    }
  }
  for (int g = 0; g < static_cast<int>(d.complex.gluings().size()); ++g) {
    if (open_gluings.count(g)) continue;
    const auto& gl = d.complex.gluing(g);
    if (!local.count(gl.a.cell) || !local.count(gl.b.cell)) continue;
    PolyGluing ng = gl;
    ng.a.cell = local.at(gl.a.cell);
    ng.b.cell = local.at(gl.b.cell);
    p.complex.add_gluing(std::move(ng));
  }
  return p;
}

namespace {

std::vector<int> incident_annuli(const GIDecomposition& d, const std::vector<int>& nodes) {
  std::vector<int> out;
  for (const auto& a : d.annuli)
    for (const auto& s : a.sides)
      if (std::find(nodes.begin(), nodes.end(), s.node) != nodes.end()) {
        out.push_back(a.id);
        break;
      }
  return out;
}

}  // namespace

PatternedManifold node_piece(const GIDecomposition& d, int node) {
  const auto& n = d.nodes[static_cast<std::size_t>(node)];
  return extract(d, n.cells, incident_annuli(d, {node}), n.kind, n.sv_capped);
}

namespace {

struct MergePlan {
  std::set<int> merged;   // P and its neighbours
  std::set<int> removed;  // bounding annuli and those inside P
  NodeKind kind = NodeKind::Guts;
  bool mixed = false;
};

MergePlan plan_merge(const GIDecomposition& d, const std::vector<int>& nodes, const std::vector<int>& bounding) {
  MergePlan plan;
  plan.merged.insert(nodes.begin(), nodes.end());
  std::set<int> neighbours;
  for (int id : bounding)
    for (const auto& s : d.annulus(id).sides)
      if (!plan.merged.count(s.node)) neighbours.insert(s.node);
  bool any_ib = false, any_guts = false;
  for (int nb : neighbours) (guts_family(d.nodes[static_cast<std::size_t>(nb)].kind) ? any_guts : any_ib) = true;
  plan.mixed = any_ib && any_guts;
  plan.kind = any_guts ? NodeKind::PseudoGuts : NodeKind::PseudoIBundle;
  plan.merged.insert(neighbours.begin(), neighbours.end());
  plan.removed.insert(bounding.begin(), bounding.end());
  for (const auto& a : d.annuli)
    if (std::count(nodes.begin(), nodes.end(), a.sides[0].node) && std::count(nodes.begin(), nodes.end(), a.sides[1].node))
      plan.removed.insert(a.id);
  return plan;
}

// Euler characteristics of the merged node and of its parts; they agree
// when the parts meet exactly along the removed annuli.
std::pair<int, int> merge_euler(const GIDecomposition& d, const MergePlan& plan) {
  int expected = 0;
  for (int n : plan.merged) expected += node_piece(d, n).quotient().chains().euler_char();
  for (int id : plan.removed) expected -= d.annulus(id).euler_char;
  std::vector<int> kept;
  for (const auto& a : d.annuli)
    if (!plan.removed.count(a.id)) kept.push_back(a.id);
  const std::vector<int> mnodes(plan.merged.begin(), plan.merged.end());
  const int actual = extract(d, union_cells(d, mnodes), kept, NodeKind::Guts, false).quotient().chains().euler_char();
  return {actual, expected};
}

}  // namespace

std::optional<TinyCandidate> classify_candidate(const GIDecomposition& d, const std::vector<int>& nodes,
                                                const std::vector<int>& bounding) {
  TinyCandidate cand;
  cand.nodes = nodes;
  cand.bounding = bounding;
  for (const auto& a : d.annuli) {
    const bool in0 = std::find(nodes.begin(), nodes.end(), a.sides[0].node) != nodes.end();
    const bool in1 = std::find(nodes.begin(), nodes.end(), a.sides[1].node) != nodes.end();
    if (in0 && in1) ++cand.internal_annuli;
  }
  const auto p = extract(d, union_cells(d, nodes), bounding, NodeKind::Guts, false);
  if (p.annulus_count != static_cast<int>(bounding.size())) return std::nullopt;
  const auto q0 = p.quotient();
  const auto inv = boundary_inventory(q0, [&](FaceRef f) {
    const auto it = p.pattern.find(f);
    return it == p.pattern.end() ? -1 : it->second;
  });
  const BoundaryComponent* main = nullptr;
  const BoundaryComponent* puncture = nullptr;
  for (const auto& c : inv) {
    if (!c.annuli.empty()) {
      if (main) return std::nullopt;
      main = &c;
    } else if (c.sv_only && c.euler_char == 2 && !puncture) {
      puncture = &c;
    } else {
      return std::nullopt;
    }
  }
  if (!main || static_cast<int>(main->annuli.size()) != p.annulus_count || main->contains_sv) return std::nullopt;
  // Seen from inside, the pattern must still consist of annuli; a frontier
  // strip whose edges are identified only through the outside is not one.
  for (const auto& cells2 : p.annulus_cells(q0))
    if (surface_euler_char(q0, cells2) != 0 || boundary_circles(q0, cells2).size() != 2) return std::nullopt;
  if (main->euler_char == 2 && p.annulus_count == 1)
    cand.type = TinyType::I;
  else if (main->euler_char == 0 && p.annulus_count == 1)
    cand.type = TinyType::II;
  else if (main->euler_char == 0 && p.annulus_count == 2)
    cand.type = TinyType::III;
  else
    return std::nullopt;

  // Fill the puncture so that collapsing can reach the spine.
  QuotientSpec spec{all_cells(p.complex), {}, {}};
  if (puncture) {
    std::vector<FaceRef> cap;
    for (int f : puncture->faces) cap.push_back(q0.face_refs(f).front());
    spec.caps.push_back(std::move(cap));
  }
  const CellQuotient q(p.complex, std::move(spec));
  const auto h1 = q.chains().homology(1);
  const bool want_trivial = cand.type == TinyType::I;
  if (want_trivial ? !h1.trivial() : !(h1.rank == 1 && h1.torsion.empty())) return std::nullopt;
  if (cand.type != TinyType::I) {
    // Each pattern annulus must run once along the generator.
    for (const auto& cells2 : p.annulus_cells(q)) {
      const auto circles = boundary_circles(q, cells2);
      if (circles.size() != 2) return std::nullopt;
      if (!q.chains().h1_with_discs({circles.front()}).trivial()) return std::nullopt;
    }
  }
  const auto col = greedy_collapse(q.chains());
  const bool collapsed = cand.type == TinyType::I ? col.to_point() : col.to_circle();
  if (!collapsed) {
    const TinyType screened = cand.type;
    cand.type = TinyType::Unknown;
    cand.reason = std::string("passes the type-") + to_string(screened) + " screens but greedy collapse stalls at (" +
                  std::to_string(col.remaining[0]) + "," + std::to_string(col.remaining[1]) + "," +
                  std::to_string(col.remaining[2]) + "," + std::to_string(col.remaining[3]) + ")";
    return cand;
  }
  // From outside, the annuli may be pinched along fibres; such a piece
  // cannot be absorbed by an annulus gluing.
  const auto [actual, expected] = merge_euler(d, plan_merge(d, nodes, bounding));
  if (actual != expected) {
    const TinyType screened = cand.type;
    cand.type = TinyType::Unknown;
    cand.reason = std::string("type-") + to_string(screened) + " piece whose merge is not an annulus gluing (chi " +
                  std::to_string(actual) + ", expected " + std::to_string(expected) + ")";
  }
  return cand;
}

std::vector<TinyCandidate> detect_tiny(const GIDecomposition& d) {
  const int n = static_cast<int>(d.nodes.size());
  const int m = static_cast<int>(d.annuli.size());
  std::vector<TinyCandidate> out;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;

  const auto try_cut = [&](const std::vector<int>& removed) {
    UnionFind uf(static_cast<std::size_t>(n));
    for (int i = 0; i < m; ++i)
      if (std::find(removed.begin(), removed.end(), i) == removed.end())
        uf.unite(static_cast<std::size_t>(d.annuli[static_cast<std::size_t>(i)].sides[0].node),
                 static_cast<std::size_t>(d.annuli[static_cast<std::size_t>(i)].sides[1].node));
    std::map<std::size_t, std::vector<int>> comps;
    for (int v = 0; v < n; ++v) comps[uf.find(static_cast<std::size_t>(v))].push_back(v);
    for (const auto& [root, nodes] : comps) {
      bool ok = true;
      for (int i : removed) {
        const auto& a = d.annuli[static_cast<std::size_t>(i)];
        const bool in0 = uf.find(static_cast<std::size_t>(a.sides[0].node)) == root;
        const bool in1 = uf.find(static_cast<std::size_t>(a.sides[1].node)) == root;
        if (in0 == in1) ok = false;  // both sides inside, or not bounding
      }
      if (!ok) continue;
      std::vector<int> ids;
      for (int i : removed) ids.push_back(d.annuli[static_cast<std::size_t>(i)].id);
      std::sort(ids.begin(), ids.end());
      if (!seen.emplace(nodes, ids).second) continue;
      if (auto c = classify_candidate(d, nodes, ids)) out.push_back(std::move(*c));
    }
  };
  for (int i = 0; i < m; ++i) try_cut({i});
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) try_cut({i, j});
  return out;
}

GIDecomposition absorb_tiny(GIDecomposition d) {
  if (d.stage == Stage::BallPlugged) throw DomainError("absorption runs before the ball is plugged");
  while (true) {
    const auto cands = detect_tiny(d);
    std::vector<const TinyCandidate*> tiny;
    d.unknown.clear();
    for (const auto& c : cands) (c.type == TinyType::Unknown ? d.unknown.push_back(c) : tiny.push_back(&c));
    if (tiny.empty()) break;
    // Largest first so nested tiny pieces go in one elimination; ties by
    // signature, then by node list.
    std::vector<std::tuple<int, std::string, const TinyCandidate*>> order;
    for (const auto* c : tiny)
      order.emplace_back(-c->internal_annuli,
                         signature(extract(d, union_cells(d, c->nodes), c->bounding, NodeKind::Guts, false)), c);
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
      if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
      return std::get<2>(x)->nodes < std::get<2>(y)->nodes;
    });
    const TinyCandidate* pick = std::get<2>(order.front());
    const MergePlan plan = plan_merge(d, pick->nodes, pick->bounding);
    const std::set<int>& merged = plan.merged;
    const std::set<int>& removed = plan.removed;
    AbsorbStep step;
    step.type = pick->type;
    step.tiny_nodes = pick->nodes;
    step.bounding = pick->bounding;
    step.annuli_before = static_cast<int>(d.annuli.size());
    step.mixed_neighbours = plan.mixed;
    step.merged_kind = plan.kind;
    step.removed.assign(removed.begin(), removed.end());

    // New node list: untouched nodes keep their order, the merged node last.
    std::vector<int> remap(d.nodes.size(), -1);
    std::vector<DecompNode> nodes;
    for (std::size_t i = 0; i < d.nodes.size(); ++i)
      if (!merged.count(static_cast<int>(i))) {
        remap[i] = static_cast<int>(nodes.size());
        nodes.push_back(d.nodes[i]);
      }
    DecompNode joined;
    joined.kind = step.merged_kind;
    for (int i : merged) {
      const auto& c = d.nodes[static_cast<std::size_t>(i)];
      joined.cells.insert(joined.cells.end(), c.cells.begin(), c.cells.end());
      joined.sv_capped = joined.sv_capped || c.sv_capped;
      remap[static_cast<std::size_t>(i)] = static_cast<int>(nodes.size());
    }
    std::sort(joined.cells.begin(), joined.cells.end());
    nodes.push_back(std::move(joined));
    std::vector<FrontierAnnulus> annuli;
    for (auto& a : d.annuli) {
      if (removed.count(a.id)) continue;
      for (auto& s : a.sides) s.node = remap[static_cast<std::size_t>(s.node)];
      annuli.push_back(std::move(a));
    }
    d.nodes = std::move(nodes);
    d.annuli = std::move(annuli);
    step.annuli_after = static_cast<int>(d.annuli.size());
    if (step.annuli_after >= step.annuli_before) throw InternalError("absorption did not reduce the annuli");
    if (step.mixed_neighbours) d.notes.push_back("tiny piece with guts and I-bundle neighbours merged as pseudo-guts");
    d.history.push_back(std::move(step));
  }
  d.stage = Stage::Absorbed;
  return d;
}

namespace {

// Replaces the given nodes by one node (appended last) and renumbers annulus
// sides. Returns the new node index.
int merge_nodes(GIDecomposition& d, const std::set<int>& group) {
  bool any_guts = false;
  for (int h : group) any_guts = any_guts || guts_family(d.nodes[static_cast<std::size_t>(h)].kind);
  std::vector<int> remap(d.nodes.size(), -1);
  std::vector<DecompNode> nodes;
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    if (!group.count(static_cast<int>(i))) {
      remap[i] = static_cast<int>(nodes.size());
      nodes.push_back(d.nodes[i]);
    }
  DecompNode joined;
  joined.kind = any_guts ? NodeKind::PseudoGuts : NodeKind::PseudoIBundle;
  for (int h : group) {
    const auto& c = d.nodes[static_cast<std::size_t>(h)].cells;
    joined.cells.insert(joined.cells.end(), c.begin(), c.end());
    joined.sv_capped = joined.sv_capped || d.nodes[static_cast<std::size_t>(h)].sv_capped;
    remap[static_cast<std::size_t>(h)] = static_cast<int>(nodes.size());
  }
  std::sort(joined.cells.begin(), joined.cells.end());
  nodes.push_back(std::move(joined));
  for (auto& a : d.annuli)
    for (auto& s : a.sides) s.node = remap[static_cast<std::size_t>(s.node)];
  d.nodes = std::move(nodes);
  return static_cast<int>(d.nodes.size()) - 1;
}

}  // namespace

GIDecomposition plug_ball(GIDecomposition d) {
  if (d.stage == Stage::FirstApprox) throw DomainError("plug the ball after absorption");
  if (d.stage == Stage::BallPlugged) return d;
  std::set<int> holders;
  for (int c = 0; c < static_cast<int>(d.complex.cells().size()); ++c)
    for (const auto& f : d.complex.cell(c).faces)
      if (f.cls == FaceClass::DiscSv) holders.insert(d.node_of(c));
  holders.erase(-1);
  if (holders.empty()) {
    d.stage = Stage::BallPlugged;
    return d;
  }
  int holder = *holders.begin();
  if (holders.size() > 1) {
    d.notes.push_back("vertex link spread over " + std::to_string(holders.size()) + " nodes; merged before plugging");
    holder = merge_nodes(d, holders);
  }
  // An annulus meeting the vertex link would cut the sphere being capped;
  // such annuli are glued shut and their far sides join the plugged node.
  const CellQuotient q(d.complex, {all_cells(d.complex), {}, {}});
  std::set<int> sv_edges;
  for (int f : q.boundary_faces()) {
    const FaceRef fr = q.face_refs(f).front();
    if (d.complex.cell(fr.cell).faces[static_cast<std::size_t>(fr.face)].cls == FaceClass::DiscSv)
      for (int e : q.chains().occ[2][static_cast<std::size_t>(f)]) sv_edges.insert(e);
  }
  const auto meets_sv = [&](const FrontierAnnulus& a) {
    for (int g : a.gluings)
      for (int e : q.chains().occ[2][static_cast<std::size_t>(q.face_of(d.complex.gluing(g).a).first)])
        if (sv_edges.count(e)) return true;
    return false;
  };
  std::set<int> group{holder};
  std::vector<FrontierAnnulus> kept;
  for (auto& a : d.annuli) {
    if (!meets_sv(a)) {
      kept.push_back(std::move(a));
      continue;
    }
    d.notes.push_back("annulus " + std::to_string(a.id) + " meets the vertex link; glued into the plugged node");
    for (const auto& s : a.sides) group.insert(s.node);
  }
  d.annuli = std::move(kept);
  holder = group.size() > 1 ? merge_nodes(d, group) : holder;
  d.nodes[static_cast<std::size_t>(holder)].sv_capped = true;
  d.stage = Stage::BallPlugged;
  return d;
}

GIDecomposition absorb(GIDecomposition d) { return plug_ball(absorb_tiny(std::move(d))); }

namespace {

// Horizontal boundary: boundary faces off the pattern, grouped by shared
// edges.
int horizontal_components(const PatternedManifold& p, const CellQuotient& q) {
  std::vector<int> faces;
  for (int f : q.boundary_faces())
    if (!p.pattern.count(q.face_refs(f).front())) faces.push_back(f);
  UnionFind uf(faces.size());
  std::map<int, std::size_t> by_edge;
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (int e : q.chains().occ[2][static_cast<std::size_t>(faces[i])]) {
      auto [it, fresh] = by_edge.emplace(e, i);
      if (!fresh) uf.unite(i, it->second);
    }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < faces.size(); ++i) roots.insert(uf.find(i));
  return static_cast<int>(roots.size());
}

}  // namespace

IBundleDescriptor describe_ibundle(const GIDecomposition& d, int node) {
  const auto& n = d.nodes[static_cast<std::size_t>(node)];
  const auto p = node_piece(d, node);
  const auto q = p.quotient();
  IBundleDescriptor desc;
  desc.node = node;
  desc.vertical_boundary_annuli = p.annulus_count;
  const bool pure = !n.sv_capped && std::all_of(p.cell_tag.begin(), p.cell_tag.end(), [](int t) { return t == kTagProduct; });
  if (!pure) {
    desc.base_euler = q.chains().euler_char();
    desc.base_boundary_circles = p.annulus_count;
    desc.twisted = horizontal_components(p, q) == 1;
    desc.base_orientable = !desc.twisted;
    return desc;
  }
  desc.from_fibres = true;
  // Product blocks: faces 0 and 1 are the discs, the rest vertical quads.
  const int ncell = static_cast<int>(p.complex.cells().size());
  std::set<int> base_vertices, base_edges, boundary_edges;
  // Levels come from the disc faces: face 0 is level 0, face 1 level 1.
  std::vector<std::vector<int>> level(static_cast<std::size_t>(ncell));
  for (int c = 0; c < ncell; ++c) {
    const auto& cell = p.complex.cell(c);
    level[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(cell.vertex_count), -1);
    for (int v : cell.faces[0].verts) level[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] = 0;
    for (int v : cell.faces[1].verts) level[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] = 1;
  }
  // Vertical edges of a quad: those joining different levels.
  for (int c = 0; c < ncell; ++c) {
    const auto& cell = p.complex.cell(c);
    for (std::size_t f = 2; f < cell.faces.size(); ++f) {
      const auto& vs = cell.faces[f].verts;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        const int u = vs[k], w = vs[(k + 1) % vs.size()];
        if (level[static_cast<std::size_t>(c)][static_cast<std::size_t>(u)] !=
            level[static_cast<std::size_t>(c)][static_cast<std::size_t>(w)])
          base_vertices.insert(q.edge_of(c, u, w).first);
      }
      const int fc = q.face_of({c, static_cast<int>(f)}).first;
      base_edges.insert(fc);
      if (p.pattern.count({c, static_cast<int>(f)})) boundary_edges.insert(fc);
    }
  }
  desc.base_euler = static_cast<int>(base_vertices.size()) - static_cast<int>(base_edges.size()) + ncell;

  ParityUF fibre(static_cast<std::size_t>(ncell)), orient(static_cast<std::size_t>(ncell));
  bool fibre_ok = true, orient_ok = true;
  // Position of a level-0 vertex in the bottom cycle.
  const auto bottom_pos = [&](int c, int v) {
    const auto& vs = p.complex.cell(c).faces[0].verts;
    return static_cast<int>(std::find(vs.begin(), vs.end(), v) - vs.begin());
  };
  const auto to_bottom = [&](int c, int v) {
    if (level[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] == 0) return v;
    // The fibre partner shares a vertical edge with v in some side quad.
    const auto& cell = p.complex.cell(c);
    for (std::size_t f = 2; f < cell.faces.size(); ++f) {
      const auto& vs = cell.faces[f].verts;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        const int a = vs[k], b = vs[(k + 1) % vs.size()];
        if (a == v && level[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] == 0) return b;
        if (b == v && level[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] == 0) return a;
      }
    }
    throw InternalError("product block vertex without a fibre");
  };
  const auto forward = [&](int c, int u, int w) {
    const int n0 = static_cast<int>(p.complex.cell(c).faces[0].verts.size());
    return (bottom_pos(c, u) + 1) % n0 == bottom_pos(c, w);
  };
  for (const auto& g : p.complex.gluings()) {
    const auto& fa = p.complex.cell(g.a.cell).faces[static_cast<std::size_t>(g.a.face)].verts;
    const auto& fb = p.complex.cell(g.b.cell).faces[static_cast<std::size_t>(g.b.face)].verts;
    const int rel = level[static_cast<std::size_t>(g.a.cell)][static_cast<std::size_t>(fa[0])] ^
                    level[static_cast<std::size_t>(g.b.cell)][static_cast<std::size_t>(fb[static_cast<std::size_t>(g.map[0])])];
    fibre_ok = fibre.unite(static_cast<std::size_t>(g.a.cell), static_cast<std::size_t>(g.b.cell), rel) && fibre_ok;
    // The two bottom vertices of the shared quad, in both cells.
    std::vector<int> ia;
    for (std::size_t k = 0; k < fa.size(); ++k)
      if (level[static_cast<std::size_t>(g.a.cell)][static_cast<std::size_t>(fa[k])] == 0) ia.push_back(static_cast<int>(k));
    if (ia.size() != 2) throw InternalError("vertical quad without two lower vertices");
    const int ua = fa[static_cast<std::size_t>(ia[0])], wa = fa[static_cast<std::size_t>(ia[1])];
    const int ub = to_bottom(g.b.cell, fb[static_cast<std::size_t>(g.map[static_cast<std::size_t>(ia[0])])]);
    const int wb = to_bottom(g.b.cell, fb[static_cast<std::size_t>(g.map[static_cast<std::size_t>(ia[1])])]);
    const bool fwd_a = forward(g.a.cell, ua, wa);
    const bool fwd_b = forward(g.b.cell, ub, wb);
    orient_ok = orient.unite(static_cast<std::size_t>(g.a.cell), static_cast<std::size_t>(g.b.cell), fwd_a == fwd_b ? 1 : 0) &&
                orient_ok;
  }
  desc.twisted = !fibre_ok;
  desc.base_orientable = orient_ok;
  // Base boundary circles: boundary vertical quads chained by fibres.
  std::vector<int> bedges(boundary_edges.begin(), boundary_edges.end());
  UnionFind uf(bedges.size());
  std::map<int, std::size_t> at_vertex;
  for (std::size_t i = 0; i < bedges.size(); ++i) {
    const FaceRef fr = q.face_refs(bedges[i]).front();
    const auto& vs = p.complex.cell(fr.cell).faces[static_cast<std::size_t>(fr.face)].verts;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const int u = vs[k], w = vs[(k + 1) % vs.size()];
      if (level[static_cast<std::size_t>(fr.cell)][static_cast<std::size_t>(u)] ==
          level[static_cast<std::size_t>(fr.cell)][static_cast<std::size_t>(w)])
        continue;
      auto [it, fresh] = at_vertex.emplace(q.edge_of(fr.cell, u, w).first, i);
      if (!fresh) uf.unite(i, it->second);
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < bedges.size(); ++i) roots.insert(uf.find(i));
  desc.base_boundary_circles = static_cast<int>(roots.size());
  return desc;
}

std::vector<IBundleDescriptor> ibundle_descriptors(const GIDecomposition& d) {
  std::vector<IBundleDescriptor> out;
  for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n)
    if (!guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) out.push_back(describe_ibundle(d, n));
  return out;
}

}  // namespace gutscat
