#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "gutscat/catalog.hpp"
#include "gutscat/norm_homology.hpp"
#include "gutscat/voxel.hpp"
#include "oracles.hpp"

using namespace gutscat;

namespace {

Triangulation data(const std::string& name) { return load_triangulation(std::string(GUTSCAT_DATA_DIR) + "/" + name); }

// Guts pieces of every two-sided surface on the bundled tables, plus their
// punctured-torus cappings.
const std::vector<PatternedManifold>& bundled_pieces() {
  static const std::vector<PatternedManifold> pieces = [] {
    std::vector<PatternedManifold> out;
    for (const auto& name : {"one_tet_a.tri", "one_tet_b.tri", "two_tet_a.tri", "two_tet_b.tri", "three_tet_a.tri",
                             "three_tet_b.tri"}) {
      const auto tri = data(name);
      for (const auto& v : enumerate_admissible(tri, tri.size() == 3 ? 1 : 2)) {
        if (!build_surface(tri, v).two_sided()) continue;
        const auto d = absorb(assemble_first(cut_along(tri, v)));
        for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n)
          if (guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) out.push_back(node_piece(d, n));
        try {
          for (auto& p : cap_with_punctured_torus(d)) out.push_back(std::move(p));
        } catch (const DomainError&) {
          // Pinched pattern annuli; see Capping.FailsOnlyOnPinchedAnnuli.
        }
      }
    }
    return out;
  }();
  return pieces;
}

const std::vector<std::string> kSelectors = {"none", "boundary", "pattern", "complement"};

// The relative complex built from the absolute one by deleting the closure
// of the selected faces, with rows and columns shuffled.
struct DenseComplex {
  std::array<int, 4> dims{};
  std::array<oracle::Dense, 4> d;  // d[k]: rows C_{k-1}, cols C_k
};

DenseComplex relative_oracle(const ChainComplex& abs, const std::vector<int>& selected, std::mt19937& rng) {
  std::array<std::set<int>, 4> gone;
  for (int f : selected) {
    gone[2].insert(f);
    for (int e : abs.occ[2][static_cast<std::size_t>(f)]) {
      gone[1].insert(e);
      for (int v : abs.occ[1][static_cast<std::size_t>(e)]) gone[0].insert(v);
    }
  }
  std::array<std::vector<int>, 4> keep;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < abs.dims[static_cast<std::size_t>(k)]; ++i)
      if (!gone[static_cast<std::size_t>(k)].count(i)) keep[static_cast<std::size_t>(k)].push_back(i);
    std::shuffle(keep[static_cast<std::size_t>(k)].begin(), keep[static_cast<std::size_t>(k)].end(), rng);
  }
  DenseComplex out;
  for (int k = 0; k < 4; ++k) out.dims[static_cast<std::size_t>(k)] = static_cast<int>(keep[static_cast<std::size_t>(k)].size());
  for (int k = 1; k < 4; ++k) {
    const auto& rows = keep[static_cast<std::size_t>(k - 1)];
    const auto& cols = keep[static_cast<std::size_t>(k)];
    auto& m = out.d[static_cast<std::size_t>(k)];
    m.assign(rows.size(), std::vector<BigInt>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) m[r][c] = abs.d[static_cast<std::size_t>(k)].at(rows[r], cols[c]);
  }
  return out;
}

oracle::Group oracle_homology(const DenseComplex& c, int k) {
  const oracle::Dense empty;
  const auto& dk = k == 0 ? empty : c.d[static_cast<std::size_t>(k)];
  const auto& dk1 = k == 3 ? empty : c.d[static_cast<std::size_t>(k + 1)];
  const std::size_t dk1_cols = k == 3 ? 0 : static_cast<std::size_t>(c.dims[static_cast<std::size_t>(k + 1)]);
  if (dk.size() == 0 || c.dims[static_cast<std::size_t>(k)] == 0) {
    // d_k has no rows; every chain is a cycle.
    return oracle::homology(c.dims[static_cast<std::size_t>(k)], {}, dk1, dk1_cols);
  }
  return oracle::homology(c.dims[static_cast<std::size_t>(k)], dk, dk1, dk1_cols);
}

}  // namespace

TEST(ChiMinus, Examples) {
  EXPECT_EQ(chi_minus(std::vector<int>{0}), 0);
  EXPECT_EQ(chi_minus(std::vector<int>{-2}), 2);
  EXPECT_EQ(chi_minus(std::vector<int>{2, -4}), 4);
  EXPECT_EQ(chi_minus(std::vector<int>{}), 0);
}

TEST(ChiMinus, RandomListsMatchTheDefinition) {
  std::mt19937 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> euler(1 + rng() % 8);
    for (auto& e : euler) e = 2 - static_cast<int>(rng() % 12);
    int expected = 0;
    for (int e : euler) expected += e < 0 ? -e : 0;
    EXPECT_EQ(chi_minus(euler), expected);
  }
}

TEST(ChiMinus, OfABuiltSurface) {
  const auto tri = data("two_tet_b.tri");
  const auto s = build_surface(tri, parse_surface("2 2 0 0 2 0 0 0 2 0 2 0 2 0"));
  EXPECT_EQ(chi_minus(s), 4);
}

TEST(RelSelector, ParseAndPrint) {
  for (const auto& t : {"none", "boundary", "pattern", "complement", "component:2"})
    EXPECT_EQ(RelSelector::parse(t).str(), t);
  EXPECT_THROW(RelSelector::parse("component:x"), DomainError);
  EXPECT_THROW(RelSelector::parse("sideways"), DomainError);
}

TEST(RelativeHomology, SolidTorusRelNothing) {
  const auto fixtures = tiny_fixtures();
  const auto torus = node_piece(fixtures[1].decomposition, 1);
  const auto rep = relative_homology(torus, {RelSelector::Kind::None, -1});
  EXPECT_EQ(rep.homology[1].rank, 1);
  EXPECT_TRUE(rep.homology[1].torsion.empty());
  EXPECT_EQ(rep.h2_rank, 0);
  EXPECT_EQ(rep.homology[0].rank, 1);
  EXPECT_TRUE(rep.euler_consistent());
}

TEST(RelativeHomology, BallRelBoundary) {
  const auto fixtures = tiny_fixtures();
  const auto ball = node_piece(fixtures[0].decomposition, 1);
  const auto rep = relative_homology(ball, {RelSelector::Kind::Boundary, -1});
  EXPECT_EQ(rep.h2_rank, 0);
  EXPECT_EQ(rep.homology[3].rank, 1);
  EXPECT_EQ(rep.homology[0].rank, 0);
  EXPECT_TRUE(rep.euler_consistent());
}

TEST(RelativeHomology, MissingComponentIsADomainError) {
  const auto ball = node_piece(tiny_fixtures()[0].decomposition, 1);
  EXPECT_THROW(relative_homology(ball, RelSelector::parse("component:7")), DomainError);
}

TEST(RelativeHomology, BundledPiecesMatchDenseOracle) {
  std::mt19937 rng(9);
  const auto& pieces = bundled_pieces();
  ASSERT_FALSE(pieces.empty());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    const auto q = p.quotient();
    for (const auto& sel : kSelectors) {
      const auto rel = RelSelector::parse(sel);
      const auto rep = relative_homology(p, rel);
      const auto dense = relative_oracle(q.chains(), selected_faces(p, q, rel), rng);
      for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(rep.relative_dims[static_cast<std::size_t>(k)], dense.dims[static_cast<std::size_t>(k)]);
        EXPECT_EQ(oracle::from_library(rep.homology[static_cast<std::size_t>(k)]), oracle_homology(dense, k))
            << "piece " << i << " rel " << sel << " H" << k;
      }
      EXPECT_EQ(rep.h2_rank, rep.homology[2].rank);
      EXPECT_TRUE(rep.euler_consistent()) << "piece " << i << " rel " << sel;
      int alt = 0, dims = 0;
      for (int k = 0; k < 4; ++k) {
        const int s = k % 2 ? -1 : 1;
        alt += s * rep.homology[static_cast<std::size_t>(k)].rank;
        dims += s * rep.relative_dims[static_cast<std::size_t>(k)];
      }
      EXPECT_EQ(alt, dims);
    }
  }
}

TEST(TN, OfASet) {
  EXPECT_EQ(tn_of_set({0, 0, 3}), 3);
  EXPECT_EQ(tn_of_set({}), 0);
  EXPECT_EQ(tn_of_set({5, 2, 5}), 5);
}

TEST(TN, NoSecondHomologyGivesZero) {
  const auto ball = node_piece(tiny_fixtures()[0].decomposition, 1);
  const RelSelector none{RelSelector::Kind::None, -1};
  ASSERT_EQ(relative_homology(ball, none).h2_rank, 0);
  const auto tn = tn_upper_bound({ball}, {{}}, none);
  EXPECT_TRUE(tn.generating);
  ASSERT_TRUE(tn.bound.has_value());
  EXPECT_EQ(*tn.bound, 0);
}

TEST(TN, SolidTorusMeridianDisc) {
  const auto torus = node_piece(tiny_fixtures()[1].decomposition, 1);
  const RelSelector boundary{RelSelector::Kind::Boundary, -1};
  const auto cycles = kernel_cycles(torus, boundary);
  ASSERT_EQ(relative_homology(torus, boundary).h2_rank, 1);
  // A basis of relative 2-cycles: the meridian disc plus boundaries of cubes.
  ASSERT_FALSE(cycles.empty());
  for (const auto& c : cycles) EXPECT_EQ(c.chi_minus, 0);
  const auto tn = tn_upper_bound({torus}, {cycles}, boundary);
  ASSERT_TRUE(tn.bound.has_value());
  EXPECT_EQ(*tn.bound, 0);
}

TEST(TN, KernelCyclesGenerateOnBundledPieces) {
  const RelSelector rel{RelSelector::Kind::Complement, -1};
  for (const auto& p : bundled_pieces()) {
    const auto q = p.quotient();
    const auto rc = relative_complex(p, q, rel);
    const auto cycles = kernel_cycles(p, rel);
    const auto span = span_check(rc.chains, cycles);
    EXPECT_TRUE(span.generates());
    EXPECT_EQ(span.kernel_rank, static_cast<int>(cycles.size()));
    for (const auto& c : cycles) EXPECT_GE(c.chi_minus, 0);
  }
}

TEST(TN, MonotoneUnderExtension) {
  const RelSelector rel{RelSelector::Kind::Complement, -1};
  std::mt19937 rng(4);
  const auto& pieces = bundled_pieces();
  std::vector<std::vector<RelativeCycle>> base;
  for (const auto& p : pieces) base.push_back(kernel_cycles(p, rel));
  const auto tn0 = tn_upper_bound(pieces, base, rel);
  ASSERT_TRUE(tn0.bound.has_value());
  // Extra cycles: sums of basis cycles, with arbitrary chi_- labels.
  for (int trial = 0; trial < 5; ++trial) {
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
    const auto tn = tn_upper_bound(pieces, more, rel);
    ASSERT_TRUE(tn.bound.has_value());
    EXPECT_LE(*tn.bound, *tn0.bound);
    for (std::size_t i = 0; i < tn.per_piece.size(); ++i) EXPECT_LE(tn.per_piece[i], tn0.per_piece[i]);
  }
  // With no cycles at all, a piece with second homology fails the span check.
  bool tested = false;
  for (std::size_t i = 0; i < pieces.size() && !tested; ++i) {
    if (relative_homology(pieces[i], rel).h2_rank == 0) continue;
    auto fewer = base;
    fewer[i].clear();
    const auto tn = tn_upper_bound(pieces, fewer, rel);
    EXPECT_FALSE(tn.bound.has_value());
    EXPECT_EQ(tn.per_piece[i], -1);
    tested = true;
  }
  EXPECT_TRUE(tested);
}

TEST(Separating, FixturesCarveAndKeepEuler) {
  const auto fixtures = separating_fixtures();
  ASSERT_EQ(fixtures.size(), 3u);
  for (const auto& f : fixtures) {
    const auto r = refine_separating(f.decomposition);
    int carved = 0;
    for (const auto& c : r.carves) {
      if (c.skipped) continue;
      ++carved;
      EXPECT_EQ(c.chi_f, f.chi_f) << f.name;
      EXPECT_EQ(c.circles, f.circles) << f.name;
      // Q is planar with one circle more than F: chi(Q) = 2 - (circles + 1).
      EXPECT_EQ(c.chi_q, 1 - f.circles) << f.name;
      EXPECT_EQ(c.chi_q_cells, c.chi_q) << f.name;
      EXPECT_EQ(c.chi_base_prime, c.chi_f - c.chi_q) << f.name;
      ASSERT_GE(c.piece, 0);
      EXPECT_FALSE(r.annuli_prime[static_cast<std::size_t>(c.piece)].empty());
    }
    EXPECT_EQ(carved, 1) << f.name;
    EXPECT_EQ(r.boundary_euler_after, r.boundary_euler_before) << f.name;
  }
}

TEST(Separating, PuncturedTorusAndPants) {
  std::map<std::string, std::pair<int, int>> expected{{"punctured-torus-on-slab", {0, -1}},
                                                      {"pants-under-lid", {-2, 1}}};
  for (const auto& f : separating_fixtures()) {
    if (!expected.count(f.name)) continue;
    const auto r = refine_separating(f.decomposition);
    for (const auto& c : r.carves)
      if (!c.skipped) {
        EXPECT_EQ(c.chi_q, expected[f.name].first) << f.name;
        EXPECT_EQ(c.chi_base_prime, expected[f.name].second) << f.name;
      }
  }
}

TEST(Separating, NoIBundlesLeavesGutsUnchanged) {
  const auto tri = data("two_tet_a.tri");
  const auto d = absorb(assemble_first(cut_along(tri, NormalSurfaceVector::zero(2))));
  const auto r = refine_separating(d);
  EXPECT_TRUE(r.carves.empty());
  ASSERT_EQ(r.guts_prime.size(), 1u);
  EXPECT_EQ(signature(r.guts_prime[0]), signature(node_piece(d, 0)));
  EXPECT_EQ(r.boundary_euler_after, r.boundary_euler_before);
}

TEST(Separating, BundledDataSkipsWithReasons) {
  for (const auto& name : {"two_tet_a.tri", "two_tet_b.tri"}) {
    const auto tri = data(name);
    for (const auto& v : enumerate_admissible(tri, 2)) {
      if (!build_surface(tri, v).two_sided()) continue;
      const auto r = refine_separating(absorb(assemble_first(cut_along(tri, v))));
      for (const auto& c : r.carves)
        if (c.skipped) EXPECT_FALSE(c.reason.empty());
      EXPECT_EQ(r.boundary_euler_after, r.boundary_euler_before);
    }
  }
}

TEST(Capping, FailsOnlyOnPinchedAnnuli) {
  int failures = 0, capped = 0;
  for (const auto& name : {"one_tet_a.tri", "one_tet_b.tri", "two_tet_a.tri", "two_tet_b.tri", "three_tet_a.tri",
                           "three_tet_b.tri"}) {
    const auto tri = data(name);
    for (const auto& v : enumerate_admissible(tri, tri.size() == 3 ? 1 : 2)) {
      if (!build_surface(tri, v).two_sided()) continue;
      const auto d = absorb(assemble_first(cut_along(tri, v)));
      // Whether some guts pattern, seen from inside its piece, fails to be a
      // single annulus per label.
      bool pinched = false;
      for (int n = 0; n < static_cast<int>(d.nodes.size()); ++n) {
        if (!guts_family(d.nodes[static_cast<std::size_t>(n)].kind)) continue;
        const auto p = node_piece(d, n);
        const auto q = p.quotient();
        for (const auto& cells : p.annulus_cells(q))
          if (surface_euler_char(q, cells) != 0 || boundary_circles(q, cells).size() != 2) pinched = true;
      }
      try {
        const auto pieces = cap_with_punctured_torus(d);
        ++capped;
        EXPECT_FALSE(pinched) << name << " " << v.str();
        for (const auto& p : pieces) {
          EXPECT_EQ(p.annulus_count, 0);
          EXPECT_TRUE(relative_homology(p, {RelSelector::Kind::None, -1}).euler_consistent());
        }
      } catch (const DomainError&) {
        ++failures;
        EXPECT_TRUE(pinched) << name << " " << v.str();
      }
    }
  }
  EXPECT_EQ(failures, 4);
  EXPECT_EQ(capped, 24);
}
