#include "commands.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gutscat/catalog.hpp"
#include "gutscat/error.hpp"
#include "gutscat/jsj_gluing.hpp"
#include "gutscat/norm_homology.hpp"
#include "gutscat/piece_io.hpp"
#include "gutscat/seifert.hpp"

namespace gutscat::cli {

std::string Context::load(const std::string& path) {
  std::string text = read_file(path);
  inputs.push_back({path, digest_bytes(text)});
  return text;
}

namespace {

template <class Range, class F>
std::string join(const Range& r, F f, const char* sep = " ") {
  std::string out;
  bool first = true;
  for (const auto& x : r) {
    if (!first) out += sep;
    out += f(x);
    first = false;
  }
  return out;
}

std::string ints(const std::vector<int>& v) {
  return "[" + join(v, [](int x) { return std::to_string(x); }, ",") + "]";
}

std::string ints64(const std::vector<std::int64_t>& v) {
  return "(" + join(v, [](std::int64_t x) { return std::to_string(x); }, ",") + ")";
}

Triangulation read_tri(Context& ctx, const std::string& path) { return parse_triangulation(ctx.load(path)); }

NormalSurfaceVector read_surface(Context& ctx, const std::string& path) { return parse_surface(ctx.load(path)); }

void surface_lines(Report& r, const SurfaceComplex& s) {
  r.put("euler", s.euler_char());
  r.put("components", static_cast<int>(s.components.size()));
  r.put("two-sided", s.two_sided());
  r.put("chi-minus", chi_minus(s));
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    const auto& c = s.components[i];
    r.text("component " + std::to_string(i) + " euler " + std::to_string(c.euler_char) + " orientable " +
           (c.orientable ? "1" : "0") + " two-sided " + (c.two_sided ? "1" : "0") + " discs " +
           std::to_string(c.disc_count) + (c.is_vertex_linking ? " vertex-linking" : ""));
  }
}

void node_lines(Report& r, const GIDecomposition& d) {
  r.put("stage", to_string(d.stage));
  r.put("nodes", static_cast<int>(d.nodes.size()));
  r.put("annuli", static_cast<int>(d.annuli.size()));
  for (std::size_t n = 0; n < d.nodes.size(); ++n) {
    const auto& node = d.nodes[n];
    std::vector<int> met;
    for (const auto& a : d.annuli)
      if (a.sides[0].node == static_cast<int>(n) || a.sides[1].node == static_cast<int>(n)) met.push_back(a.id);
    std::string line = "node " + std::to_string(n) + " " + to_string(node.kind) + " cells " +
                       std::to_string(node.cells.size()) + " annuli " + ints(met);
    if (node.sv_capped) line += " capped";
    if (guts_family(node.kind)) line += " sig " + signature_digest(signature(node_piece(d, static_cast<int>(n))));
    r.text(line);
  }
  for (const auto& a : d.annuli)
    r.text("annulus " + std::to_string(a.id) + " nodes " + std::to_string(a.sides[0].node) + " " +
           std::to_string(a.sides[1].node) + " faces " + std::to_string(a.sides[0].faces.size()) + " euler " +
           std::to_string(a.euler_char) + " circles " + std::to_string(a.boundary_circles));
}

}  // namespace

Outcome run_validate(Context& ctx, const std::string& tri_path) {
  const auto tri = read_tri(ctx, tri_path);
  Report r("validate");
  const auto v = validate(tri);
  r.put("tetrahedra", tri.size());
  r.put("closed", v.closed);
  r.put("orientable", v.orientable);
  r.put("vertices", v.vertex_count);
  r.put("edges-valid", v.edges_valid);
  r.put("vertex-link-euler", v.vertex_link_euler);
  r.put("vertex-link-connected", v.vertex_link_connected);
  r.put("ok", v.ok());
  if (v.ok()) {
    r.section("vertex-link");
    surface_lines(r, build_surface(tri, vertex_link(tri)));
  }
  return {r, v.ok() ? 0 : 1};
}

Outcome run_surfaces(Context& ctx, const std::string& tri_path, int max_coord) {
  const auto tri = read_tri(ctx, tri_path);
  require_valid_one_vertex(tri);
  EnumerationOptions opts;
  opts.threads = ctx.threads;
  const auto all = enumerate_admissible(tri, max_coord, opts);
  Report r("surfaces");
  r.put("tetrahedra", tri.size());
  r.put("max-coord", max_coord);
  r.put("count", static_cast<int>(all.size()));
  for (const auto& v : all) {
    const auto s = build_surface(tri, v);
    r.text("surface " + v.str() + " | euler " + std::to_string(s.euler_char()) + " components " +
           std::to_string(s.components.size()) + " two-sided " + (s.two_sided() ? "1" : "0") + " chi-minus " +
           std::to_string(chi_minus(s)));
  }
  return {r, 0};
}

Outcome run_cut(Context& ctx, const std::string& tri_path, const std::string& surface_path) {
  const auto tri = read_tri(ctx, tri_path);
  const auto v = read_surface(ctx, surface_path);
  require_valid_one_vertex(tri);
  const auto cc = cut_along(tri, v);
  const auto census = piece_census(cc);
  Report r("cut");
  r.put("surface", v.str());
  r.put("tetrahedra", cc.tet_count);
  r.put("truncated-tets", census.truncated_tets);
  r.put("prisms", census.prisms);
  r.put("products", census.products);
  r.put("n<=t", census.truncated_tets <= cc.tet_count);
  r.put("m<=2t", census.prisms <= 2 * cc.tet_count);
  r.put("quad-rule", quad_rule_holds(cc));
  r.put("frontier-gluings", cc.frontier_count());
  r.section("pieces");
  for (std::size_t i = 0; i < cc.pieces.size(); ++i) {
    const auto& p = cc.pieces[i];
    r.text("piece " + std::to_string(i) + " " + to_string(p.kind) + " tet " + std::to_string(p.source_tet) +
           " disc " + std::to_string(p.disc_type) + " layer " + std::to_string(p.layer) + " faces " +
           std::to_string(cc.complex.cell(static_cast<int>(i)).faces.size()));
  }
  r.section("pairings");
  std::map<std::string, int> kinds;
  for (const auto& g : cc.complex.gluings()) ++kinds[to_string(g.kind)];
  for (const auto& [k, n] : kinds) r.put(k, n);
  r.section("frontier");
  for (const auto& g : cc.complex.gluings())
    if (g.kind == GlueKind::Frontier)
      r.text(std::to_string(g.a.cell) + "." + std::to_string(g.a.face) + " ~ " + std::to_string(g.b.cell) + "." +
             std::to_string(g.b.face));
  return {r, 0};
}

Outcome run_guts(Context& ctx, const std::string& tri_path, const std::string& surface_path,
                 const std::string& pieces_out, bool refined) {
  const auto tri = read_tri(ctx, tri_path);
  const auto v = read_surface(ctx, surface_path);
  require_valid_one_vertex(tri);
  if (!is_admissible(tri, v)) throw DomainError("surface vector is not admissible");
  if (!build_surface(tri, v).two_sided()) throw DomainError("surface is one-sided");
  Report r("guts");
  r.put("surface", v.str());
  const auto first = assemble_first(cut_along(tri, v));
  r.section("first-approx");
  node_lines(r, first);
  const auto absorbed = absorb_tiny(first);
  r.section("absorb");
  r.put("steps", static_cast<int>(absorbed.history.size()));
  for (const auto& s : absorbed.history)
    r.text(std::string("step type ") + to_string(s.type) + " tiny " + ints(s.tiny_nodes) + " bounding " +
           ints(s.bounding) + " removed " + ints(s.removed) + " annuli " + std::to_string(s.annuli_before) + " -> " +
           std::to_string(s.annuli_after) + " merged " + to_string(s.merged_kind) +
           (s.mixed_neighbours ? " mixed" : ""));
  r.put("unknown", static_cast<int>(absorbed.unknown.size()));
  for (const auto& u : absorbed.unknown)
    r.text("unknown nodes " + ints(u.nodes) + " bounding " + ints(u.bounding) + ": " + u.reason);
  const auto plugged = plug_ball(absorbed);
  r.section("plugged");
  node_lines(r, plugged);
  for (const auto& n : plugged.notes) r.text("note " + n);
  r.section("ibundles");
  for (const auto& b : ibundle_descriptors(plugged))
    r.text("node " + std::to_string(b.node) + " base-euler " + std::to_string(b.base_euler) + " circles " +
           std::to_string(b.base_boundary_circles) + " annuli " + std::to_string(b.vertical_boundary_annuli) +
           (b.twisted ? " twisted" : " product") + (b.from_fibres ? " fibres" : " homotopy"));
  r.section("signatures");
  std::set<std::string> sigs;
  std::vector<PatternedManifold> pieces;
  for (int n = 0; n < static_cast<int>(plugged.nodes.size()); ++n)
    if (guts_family(plugged.nodes[static_cast<std::size_t>(n)].kind)) {
      pieces.push_back(node_piece(plugged, n));
      sigs.insert(signature(pieces.back()));
    }
  for (const auto& s : sigs) r.text(signature_digest(s));
  const BigInt bound = boost::multiprecision::pow(BigInt(5), tri.size());
  r.put("distinct", static_cast<int>(sigs.size()));
  r.put("crude-bound", to_string(bound));
  r.put("within-bound", BigInt(sigs.size()) <= bound);
  const auto ref = refine_separating(plugged);
  r.section("separating");
  for (const auto& c : ref.carves)
    r.text("ibundle " + std::to_string(c.ibundle) + " chi-f " + std::to_string(c.chi_f) + " circles " +
           std::to_string(c.circles) +
           (c.skipped ? " skipped: " + c.reason
                      : " carved piece " + std::to_string(c.piece) + " chi-q " + std::to_string(c.chi_q) +
                            " chi-q-cells " + std::to_string(c.chi_q_cells) + " base' " +
                            std::to_string(c.chi_base_prime)));
  r.put("boundary-euler", std::to_string(ref.boundary_euler_before) + " -> " + std::to_string(ref.boundary_euler_after));
  if (refined) pieces = ref.guts_prime;
  if (!pieces_out.empty()) {
    std::ofstream out(pieces_out, std::ios::binary);
    if (!out) throw DomainError("cannot write " + pieces_out);
    out << write_pieces(pieces);
    r.put("pieces-written", static_cast<int>(pieces.size()));
  }
  return {r, 0};
}

Outcome run_catalog(Context& ctx, const std::string& tri_path, int max_coord) {
  const auto tri = read_tri(ctx, tri_path);
  require_valid_one_vertex(tri);
  CatalogOptions opts;
  opts.threads = ctx.threads;
  const auto cat = build_catalog(tri, max_coord, opts);
  Report r("catalog");
  r.put("tetrahedra", cat.tet_count);
  r.put("max-coord", cat.bound);
  r.put("surfaces", static_cast<int>(cat.surfaces.size()));
  r.section("surfaces");
  for (const auto& s : cat.surfaces) {
    if (s.skipped) {
      r.text(s.surface.str() + " | skipped: " + s.skip_reason);
      continue;
    }
    r.text(s.surface.str() + " | n " + std::to_string(s.census.truncated_tets) + " m " +
           std::to_string(s.census.prisms) + " products " + std::to_string(s.census.products) + " annuli " +
           std::to_string(s.annuli_first) + " -> " + std::to_string(s.annuli_final) + " steps " +
           std::to_string(s.absorb_steps) + " unknown " + std::to_string(s.unknown) + " guts " +
           join(s.guts, [](const std::string& g) { return signature_digest(g); }, ","));
  }
  r.section("signatures");
  for (const auto& [sig, n] : cat.signatures) r.text(signature_digest(sig) + " pieces " + std::to_string(n));
  r.put("catalog-size", static_cast<int>(cat.signatures.size()));
  r.put("crude-bound", to_string(cat.crude_bound()));
  r.put("within-bound", cat.within_bound());
  return {r, cat.within_bound() ? 0 : 1};
}

Outcome run_norm(Context& ctx, const std::string& pieces_path, const std::string& rel_text, int index) {
  auto pieces = parse_pieces(ctx.load(pieces_path));
  const auto rel = RelSelector::parse(rel_text);
  if (index >= 0) {
    if (index >= static_cast<int>(pieces.size())) throw DomainError("piece index out of range");
    pieces = {pieces[static_cast<std::size_t>(index)]};
  }
  Report r("norm");
  r.put("rel", rel.str());
  r.put("pieces", static_cast<int>(pieces.size()));
  std::vector<std::vector<RelativeCycle>> candidates;
  bool consistent = true;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    const auto rep = relative_homology(p, rel);
    consistent = consistent && rep.euler_consistent();
    r.section("piece " + std::to_string(i));
    r.put("kind", to_string(p.kind));
    r.put("annuli", p.annulus_count);
    r.put("dims", ints({rep.relative_dims.begin(), rep.relative_dims.end()}));
    for (int k = 0; k < 4; ++k) r.put("H" + std::to_string(k), rep.homology[static_cast<std::size_t>(k)].str());
    r.put("h2-rank", rep.h2_rank);
    r.put("torsion-h1", to_string(rep.h1.torsion_order()));
    r.put("selected-chi-minus", ints(rep.chi_minus_per_component));
    r.put("selected-chi-minus-total", rep.chi_minus_total);
    r.put("euler-consistent", rep.euler_consistent());
    candidates.push_back(kernel_cycles(p, rel));
    std::vector<int> norms;
    for (const auto& c : candidates.back()) norms.push_back(c.chi_minus);
    r.put("cycle-chi-minus", ints(norms));
  }
  const auto tn = tn_upper_bound(pieces, candidates, rel);
  r.section("tn");
  r.put("generating", tn.generating);
  r.put("per-piece", ints(tn.per_piece));
  r.put("bound", tn.bound ? std::to_string(*tn.bound) : std::string("none"));
  for (const auto& f : tn.failures) r.text("failure " + f);
  return {r, consistent ? 0 : 1};
}

Outcome run_census(Context& ctx, const std::string& sv_text, const std::string& emit) {
  if (emit != "table" && emit != "lines") throw DomainError("--emit must be table or lines");
  const Rational sv = parse_rational(sv_text);
  CensusOptions opts;
  opts.threads = ctx.threads;
  const auto entries = census(sv, opts);
  Report r("census");
  r.put("sv-bound", to_string(sv));
  r.put("product-bound", census_product_bound(sv));
  r.put("count", static_cast<int>(entries.size()));
  if (emit == "table") r.text("a\tsign\tb\te0\tchi_B\tSV\tprod_a");
  for (const auto& e : entries) {
    const auto& inv = e.invariants;
    const std::string sign = inv.sign > 0 ? "+" : "-";
    if (emit == "table")
      r.text(ints64(inv.a) + "\t" + sign + "\t" + ints64(inv.b) + "\t" + to_string(inv.e0) + "\t" +
             to_string(e.chi_b) + "\t" + to_string(e.sv) + "\t" + std::to_string(e.product_a));
    else
      r.text("entry a=" + ints64(inv.a) + " sign=" + sign + " b=" + ints64(inv.b) + " e0=" + to_string(inv.e0) +
             " chi_B=" + to_string(e.chi_b) + " SV=" + to_string(e.sv) + " prod=" + std::to_string(e.product_a));
  }
  return {r, 0};
}

Outcome run_glue(Context&, long long p, long long q, int eps) {
  const auto m = gluing_matrix(p, q, eps);
  const auto back = extract_pq(m);
  const auto slope = filling_slope(m);
  const auto h1 = fill_homology(standard_vertex(1), slope);
  Report r("glue");
  r.put("matrix", m.str());
  r.put("det", m.det());
  r.put("extract", "p " + std::to_string(back.p) + " q " + std::to_string(back.q) + " eps " + std::to_string(back.eps));
  r.put("round-trip", back == GluingParams{p, q, eps});
  r.put("filling-slope", "(" + std::to_string(slope[0]) + "," + std::to_string(slope[1]) + ")");
  r.put("filled-h1", h1.str());
  r.put("homology-sphere", h1.trivial());
  return {r, 0};
}

Outcome run_tree(Context& ctx, const std::string& file, int h) {
  const auto t = parse_tree(ctx.load(file));
  const auto th = assemble_tree(t);
  Report r("tree");
  r.put("vertices", static_cast<int>(t.vertices.size()));
  r.put("edges", static_cast<int>(t.edges.size()));
  for (std::size_t i = 0; i < t.edges.size(); ++i) r.text("edge " + std::to_string(i) + " " + t.edges[i].matrix.str());
  r.put("h1", th.h1.str());
  r.put("homology-sphere", th.homology_sphere);
  if (h >= 0) {
    const auto b = graph_bounds(h, t);
    r.put("h", b.h);
    r.put("edges<=h", b.edges_ok);
    r.put("vertices<=h+1", b.vertices_ok);
    r.put("bounds-pass", b.pass());
  }
  return {r, 0};
}

}  // namespace gutscat::cli
