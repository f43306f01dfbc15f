// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any line fails. Each check recomputes its numbers; nothing is cached.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "gutscat/capping.hpp"
#include "gutscat/catalog.hpp"
#include "gutscat/cut_complex.hpp"
#include "gutscat/error.hpp"
#include "gutscat/gi_decomposition.hpp"
#include "gutscat/jsj_gluing.hpp"
#include "gutscat/norm_homology.hpp"
#include "gutscat/normal_surface.hpp"
#include "gutscat/seifert.hpp"
#include "gutscat/triangulation.hpp"
#include "gutscat/voxel.hpp"
#include "oracles.hpp"
#include "random_tree.hpp"
#include "run_cli.hpp"

using namespace gutscat;

namespace {

const std::vector<std::string> kTables = {"one_tet_a.tri", "one_tet_b.tri", "two_tet_a.tri",
                                          "two_tet_b.tri", "three_tet_a.tri", "three_tet_b.tri"};
const std::vector<std::string> kSmallTables = {"one_tet_a.tri", "one_tet_b.tri", "two_tet_a.tri", "two_tet_b.tri"};

std::string data_path(const std::string& name) { return std::string(GUTSCAT_DATA_DIR) + "/" + name; }
Triangulation data(const std::string& name) { return load_triangulation(data_path(name)); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Guts pieces of every two-sided enumerated surface, plus the capped pieces
// where capping applies.
std::vector<PatternedManifold> bundled_guts_pieces() {
  std::vector<PatternedManifold> out;
  for (const auto& name : kTables) {
    const auto tri = data(name);
    for (const auto& v : enumerate_admissible(tri, tri.size() == 3 ? 1 : 2)) {
      if (!build_surface(tri, v).two_sided()) continue;
      const auto d = absorb(assemble_first(cut_along(tri, v)));
      for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n)
        if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) out.push_back(node_piece(d, n));
      try {
        for (auto& p : cap_with_punctured_torus(d)) out.push_back(std::move(p));
      } catch (const DomainError&) {
      }
    }
  }
  return out;
}

Outcome vertex_link_sphere() {
  int ok = 0;
  for (const auto& name : kTables) {
    const auto tri = data(name);
    const auto s = build_surface(tri, vertex_link(tri));
    ok += s.components.size() == 1 && s.euler_char() == 2 && s.components[0].euler_char == 2;
  }
  return {ok == static_cast<int>(kTables.size()) && kTables.size() >= 5,
          std::to_string(ok) + "/" + std::to_string(kTables.size()) + " tables give one sphere"};
}

Outcome census_bounds() {
  // One-sided surfaces cannot be cut, so they have no census; they are
  // counted and reported rather than dropped silently.
  int cases = 0, ok = 0, one_sided = 0;
  for (const auto& name : kSmallTables) {
    const auto tri = data(name);
    const int t = tri.size();
    for (const auto& v : enumerate_admissible(tri, 2)) {
      if (!build_surface(tri, v).two_sided()) {
        ++one_sided;
        continue;
      }
      ++cases;
      try {
        const auto cc = cut_along(tri, v);
        const auto c = piece_census(cc);
        ok += c.truncated_tets <= t && c.prisms <= 2 * t && quad_rule_holds(cc);
      } catch (const InternalError&) {
      }
    }
  }
  return {cases > 0 && ok == cases, std::to_string(ok) + "/" + std::to_string(cases) + " two-sided surfaces, " +
                                        std::to_string(one_sided) + " one-sided not cuttable"};
}

Outcome catalog_bound() {
  std::ostringstream detail;
  bool pass = true;
  for (const auto& name : kSmallTables) {
    const auto tri = data(name);
    const auto cat = build_catalog(tri, 2);
    std::map<std::string, int> replay;
    for (const auto& v : enumerate_admissible(tri, 2)) {
      if (!build_surface(tri, v).two_sided()) continue;
      const auto d = plug_ball(absorb_tiny(assemble_first(cut_along(tri, v))));
      for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n)
        if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) ++replay[signature(node_piece(d, n))];
    }
    const bool same = cat.signatures == replay;
    pass = pass && cat.within_bound() && same;
    detail << name << " " << cat.signatures.size() << "<=" << cat.crude_bound() << (same ? "" : " (replay differs)") << "; ";
  }
  return {pass, detail.str()};
}

Outcome absorption() {
  int decompositions = 0, certified_left = 0, stalled = 0, pinched = 0, bad_history = 0, not_fixed = 0;
  const auto check = [&](const GIDecomposition& before) {
    ++decompositions;
    const auto d = absorb_tiny(before);
    int count = static_cast<int>(before.annuli.size());
    for (const auto& step : d.history) {
      if (step.annuli_before != count || step.annuli_after >= step.annuli_before) ++bad_history;
      count = step.annuli_after;
    }
    if (count != static_cast<int>(d.annuli.size())) ++bad_history;
    for (const auto& c : detect_tiny(d)) {
      if (c.type != TinyType::Unknown)
        ++certified_left;
      else if (c.reason.find("not an annulus gluing") != std::string::npos)
        ++pinched;
      else
        ++stalled;
    }
    if (absorb_tiny(d).history.size() != d.history.size()) ++not_fixed;
  };
  for (const auto& name : kTables) {
    const auto tri = data(name);
    for (const auto& v : enumerate_admissible(tri, tri.size() == 3 ? 1 : 2))
      if (build_surface(tri, v).two_sided()) check(assemble_first(cut_along(tri, v)));
  }
  const auto fixtures = tiny_fixtures();
  int fixture_steps = 0;
  for (const auto& f : fixtures) {
    check(f.decomposition);
    fixture_steps += static_cast<int>(absorb_tiny(f.decomposition).history.size());
  }
  std::ostringstream detail;
  detail << decompositions << " decompositions, " << fixtures.size() << " tiny fixtures (" << fixture_steps
         << " steps); tiny left " << certified_left << ", stalled " << stalled << ", non-decreasing " << bad_history
         << ", not fixed " << not_fixed << "; pinched non-annulus merges rejected: " << pinched;
  const bool pass = certified_left == 0 && stalled == 0 && bad_history == 0 && not_fixed == 0 && fixtures.size() >= 3;
  return {pass, detail.str()};
}

Outcome sigma_237() {
  const Rational chi = orbifold_euler({2, 3, 7});
  const Rational sv = seifert_volume(homology_sphere_invariants({2, 3, 7}, 1));
  const Rational scaled = Rational(42 * 42) * sv;
  std::ostringstream detail;
  detail << "chi " << chi << ", SV " << sv << ", 42^2 SV " << scaled;
  return {chi == Rational(-1, 42) && sv == Rational(1, 42) && scaled == Rational(42), detail.str()};
}

Outcome census_oracle() {
  const auto list = census(Rational(1));
  std::set<oracle::CensusKey> got;
  bool entries_ok = true;
  for (const auto& e : list) {
    got.insert({e.invariants.a, e.invariants.b, e.invariants.sign});
    entries_ok = entries_ok && torsion_order(e.invariants) == 1 && e.chi_b <= Rational(-1, 42);
  }
  const auto expected = oracle::brute_census(1764);
  return {got == expected && got.size() == list.size() && entries_ok,
          std::to_string(list.size()) + " entries, oracle " + std::to_string(expected.size())};
}

Outcome determinant_identity() {
  int cases = 0, ok = 0;
  for (std::int64_t p = -50; p <= 50; ++p)
    for (std::int64_t q = -50; q <= 50; ++q)
      for (int eps : {-1, 1}) {
        ++cases;
        const auto m = gluing_matrix(p, q, eps);
        ok += m.det() == -1 && m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0) == -1 &&
              extract_pq(m) == GluingParams{p, q, eps};
      }
  return {ok == cases, std::to_string(ok) + "/" + std::to_string(cases)};
}

Outcome homology_spheres() {
  int fills = 0, fill_ok = 0;
  for (std::int64_t p = -50; p <= 50; ++p)
    for (int eps : {-1, 1}) {
      ++fills;
      fill_ok += fill_homology(standard_vertex(1), {p, eps}).trivial();
    }
  std::mt19937 rng(2024);
  int trees = 0, tree_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto t = testing::random_tree(rng);
    const auto h = assemble_tree(t);
    ++trees;
    tree_ok += h.homology_sphere && oracle::from_library(h.h1) == oracle::tree_h1(t) && oracle::tree_h1(t) == oracle::Group{};
  }
  return {fill_ok == fills && tree_ok == trees, "fills " + std::to_string(fill_ok) + "/" + std::to_string(fills) +
                                                    ", trees " + std::to_string(tree_ok) + "/" + std::to_string(trees)};
}

Outcome norm_plumbing() {
  std::mt19937 rng(9);
  int lists_ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> euler(1 + rng() % 8);
    int expected = 0;
    for (auto& e : euler) {
      e = 2 - static_cast<int>(rng() % 12);
      expected += std::max(-e, 0);
    }
    lists_ok += chi_minus(euler) == expected;
  }
  const auto pieces = bundled_guts_pieces();
  const RelSelector complement{RelSelector::Kind::Complement, -1};
  std::vector<std::vector<RelativeCycle>> base;
  for (const auto& p : pieces) base.push_back(kernel_cycles(p, complement));
  const auto tn0 = tn_upper_bound(pieces, base, complement);
  bool monotone = tn0.bound.has_value();
  for (int trial = 0; trial < 5 && monotone; ++trial) {
    auto more = base;
    for (auto& list : more) {
      const std::size_t n = list.size();
      for (std::size_t i = 0; i < n; ++i) {
        RelativeCycle extra = list[i];
        const auto& other = list[rng() % n];
        for (std::size_t j = 0; j < extra.coefficients.size(); ++j) extra.coefficients[j] += other.coefficients[j];
        extra.chi_minus = static_cast<int>(rng() % 4);
        list.push_back(extra);
      }
    }
    const auto tn = tn_upper_bound(pieces, more, complement);
    monotone = tn.bound.has_value() && *tn.bound <= *tn0.bound;
  }
  int euler_checks = 0, euler_ok = 0;
  for (const auto& p : pieces)
    for (const auto& sel : {"none", "boundary", "pattern", "complement"}) {
      ++euler_checks;
      euler_ok += relative_homology(p, RelSelector::parse(sel)).euler_consistent();
    }
  std::ostringstream detail;
  detail << "chi_- " << lists_ok << "/20, TN monotone " << (monotone ? "yes" : "no") << ", Euler " << euler_ok << "/"
         << euler_checks << " on " << pieces.size() << " pieces";
  return {lists_ok == 20 && monotone && euler_ok == euler_checks && !pieces.empty(), detail.str()};
}

Outcome determinism() {
  using testing::arg;
  using testing::run_cli;
  testing::ScratchDir dir("gutscat-acceptance");
  std::vector<std::string> commands;
  for (const auto& name : kTables) commands.push_back("validate --tri " + arg(data_path(name)));
  for (const auto& name : kSmallTables) commands.push_back("catalog --tri " + arg(data_path(name)) + " --max-coord 2");
  commands.push_back("census --sv-bound 1/42");
  commands.push_back("census --sv-bound 1");
  for (const auto& [p, q, eps] : std::vector<std::tuple<int, int, int>>{{2, 3, 1}, {-50, 50, -1}, {0, 0, 1}})
    commands.push_back("glue --p " + std::to_string(p) + " --q " + std::to_string(q) + " --eps " + std::to_string(eps));
  commands.push_back("tree --file " + arg(data_path("trees/path3.tree")) + " --hm 2");
  commands.push_back("tree --file " + arg(data_path("trees/knot_exterior.tree")));
  const auto surf = dir.file("s.surf", "2 2 0 0 2 0 0 1 2 1 2 0 1 0\n");
  const auto pieces = dir.path("p.pieces");
  commands.push_back("guts --tri " + arg(data_path("two_tet_b.tri")) + " --surface " + arg(surf) + " --pieces-out " + arg(pieces));
  for (const auto& sel : {"none", "boundary", "pattern", "complement"})
    commands.push_back("norm --piece " + arg(pieces) + " --rel " + sel);

  int same = 0;
  std::string first_diff;
  for (const auto& cmd : commands) {
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    const auto c = run_cli("--threads 4 " + cmd);
    const bool ok = a.status >= 0 && !a.out.empty() && a.out == b.out && a.out == c.out && a.status == b.status &&
                    a.status == c.status;
    same += ok;
    if (!ok && first_diff.empty()) first_diff = "; differs: " + cmd;
  }
  return {same == static_cast<int>(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical x3" + first_diff};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "vertex-link sphere", 1, vertex_link_sphere},
      {2, "piece census bounds", 60, census_bounds},
      {3, "catalog bound and replay", 300, catalog_bound},
      {4, "absorption", 60, absorption},
      {5, "Sigma(2,3,7) values", 1, sigma_237},
      {6, "census vs brute force", 60, census_oracle},
      {7, "gluing determinant", 1, determinant_identity},
      {8, "homology-sphere assembly", 60, homology_spheres},
      {9, "chi_- and TN plumbing", 60, norm_plumbing},
      {10, "CLI determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs < c.limit_seconds;
    failed += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%gs", secs, c.limit_seconds);
    std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << out.detail << " [" << timing
              << "]\n";
  }
  return failed == 0 ? 0 : 1;
}
