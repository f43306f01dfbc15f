#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gutscat/error.hpp"
#include "gutscat/normal_surface.hpp"
#include "gutscat/triangulation.hpp"
#include "oracles.hpp"

using namespace gutscat;

namespace {

Triangulation data(const std::string& name) { return load_triangulation(std::string(GUTSCAT_DATA_DIR) + "/" + name); }

std::string bad(const std::string& name) {
  std::ifstream in(std::string(GUTSCAT_FIXTURE_DIR) + "/bad/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kTables = {"one_tet_a.tri", "one_tet_b.tri", "two_tet_a.tri",
                                          "two_tet_b.tri", "three_tet_a.tri", "three_tet_b.tri"};

}  // namespace

TEST(SurfaceVector, ParseAndLength) {
  const auto v = parse_surface("0 1 0 0 2 0 0\n");
  EXPECT_EQ(v.tet_count(), 1);
  EXPECT_EQ(v.tri(0, 1), 1);
  EXPECT_EQ(v.quad(0, 0), 2);
  EXPECT_EQ(v.quad_type(0), 0);
  EXPECT_THROW(parse_surface(bad("wrong_length.surf")), DomainError);
  EXPECT_THROW(parse_surface("1 2 x 0 0 0 0"), DomainError);
  EXPECT_THROW(parse_surface("0 0 0 0 -1 0 0"), DomainError);
  EXPECT_THROW(parse_surface(""), DomainError);
}

TEST(SurfaceVector, QuadConstraint) {
  EXPECT_FALSE(satisfies_quad_constraint(parse_surface(bad("two_quads.surf"))));
  EXPECT_TRUE(satisfies_quad_constraint(parse_surface("5 5 5 5 0 0 3")));
}

TEST(SurfaceVector, OverflowIsADomainError) {
  const auto big = NormalSurfaceVector({INT64_MAX, 0, 0, 0, 0, 0, 0});
  EXPECT_THROW(big + big, DomainError);
  EXPECT_THROW(big.scaled(2), DomainError);
}

TEST(Matching, MatrixAgreesWithArcOracle) {
  std::mt19937 rng(11);
  for (const auto& name : kTables) {
    const auto tri = data(name);
    const auto m = matching_matrix(tri);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<std::int64_t> x(static_cast<std::size_t>(7 * tri.size()));
      for (auto& c : x) c = static_cast<std::int64_t>(rng() % 3);
      EXPECT_EQ(satisfies_matching(tri, NormalSurfaceVector(x)), oracle::matching_holds(tri, x)) << name;
    }
    EXPECT_TRUE(satisfies_matching(tri, vertex_link(tri)));
    for (const auto& row : m) EXPECT_EQ(row.size(), static_cast<std::size_t>(7 * tri.size()));
  }
}

TEST(Matching, AdmissibilityNeedsTheRightLength) {
  const auto tri = data("two_tet_a.tri");
  EXPECT_THROW(is_admissible(tri, NormalSurfaceVector::zero(1)), DomainError);
  EXPECT_TRUE(is_admissible(tri, NormalSurfaceVector::zero(2)));
}

TEST(Enumerate, OneTetrahedronMatchesBruteForce) {
  for (const auto& name : {"one_tet_a.tri", "one_tet_b.tri"}) {
    const auto tri = data(name);
    for (int k = 0; k <= 2; ++k) {
      std::vector<std::vector<std::int64_t>> got;
      for (const auto& v : enumerate_admissible(tri, k)) got.push_back(v.coords());
      EXPECT_EQ(got, oracle::brute_surfaces(tri, k)) << name << " k=" << k;
    }
  }
}

TEST(Enumerate, TwoTetrahedraMatchBruteForce) {
  for (const auto& name : {"two_tet_a.tri", "two_tet_b.tri"}) {
    const auto tri = data(name);
    std::vector<std::vector<std::int64_t>> got;
    for (const auto& v : enumerate_admissible(tri, 2)) got.push_back(v.coords());
    EXPECT_EQ(got, oracle::brute_surfaces(tri, 2)) << name;
  }
}

TEST(Enumerate, ThreadsDoNotChangeTheList) {
  const auto tri = data("three_tet_a.tri");
  EnumerationOptions one, four;
  four.threads = 4;
  EXPECT_EQ(enumerate_admissible(tri, 1, one), enumerate_admissible(tri, 1, four));
}

TEST(Enumerate, GuardAndBounds) {
  const auto tri = data("three_tet_a.tri");
  EnumerationOptions tight;
  tight.guard_bits = 10;
  EXPECT_THROW(enumerate_admissible(tri, 3, tight), GuardError);
  EXPECT_THROW(enumerate_admissible(tri, -1), DomainError);
  const auto zero = enumerate_admissible(tri, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_TRUE(zero[0].is_zero());
}

TEST(Enumerate, ResultsAreAdmissibleAndFreeOfTheLink) {
  for (const auto& name : kTables) {
    const auto tri = data(name);
    const int k = tri.size() == 3 ? 1 : 2;
    for (const auto& v : enumerate_admissible(tri, k)) {
      EXPECT_TRUE(is_admissible(tri, v));
      EXPECT_TRUE(oracle::quads_ok(v.coords()));
      EXPECT_EQ(strip_vertex_linking(v), v);
    }
  }
}

TEST(BuildSurface, EulerMatchesCoordinateOracle) {
  for (const auto& name : kTables) {
    const auto tri = data(name);
    const int k = tri.size() == 3 ? 1 : 2;
    for (const auto& v : enumerate_admissible(tri, k)) {
      const auto s = build_surface(tri, v);
      EXPECT_EQ(s.euler_char(), oracle::euler_from_coords(tri, v.coords())) << name << " " << v.str();
      int sum = 0;
      std::int64_t discs = 0;
      for (const auto& c : s.components) sum += c.euler_char, discs += c.disc_count;
      EXPECT_EQ(sum, s.euler_char());
      std::int64_t total = 0;
      for (auto c : v.coords()) total += c;
      EXPECT_EQ(discs, total);
    }
  }
}

TEST(BuildSurface, DoubleOfASurfaceHasTwiceTheEuler) {
  const auto tri = data("two_tet_b.tri");
  for (const auto& v : enumerate_admissible(tri, 1)) {
    if (v.is_zero()) continue;
    const auto s1 = build_surface(tri, v);
    const auto s2 = build_surface(tri, v.scaled(2));
    EXPECT_EQ(s2.euler_char(), 2 * s1.euler_char());
    EXPECT_EQ(s2.euler_char(), oracle::euler_from_coords(tri, v.scaled(2).coords()));
  }
}

TEST(BuildSurface, RejectsNonAdmissible) {
  const auto tri = data("one_tet_a.tri");
  EXPECT_THROW(build_surface(tri, parse_surface("1 0 0 0 0 0 0")), DomainError);
}

TEST(StripVertexLink, RemovesTheLargestMultiple) {
  const auto tri = data("two_tet_a.tri");
  const auto link = vertex_link(tri);
  EXPECT_TRUE(strip_vertex_linking(link).is_zero());
  EXPECT_TRUE(strip_vertex_linking(link.scaled(3)).is_zero());
  for (const auto& v : enumerate_admissible(tri, 2)) {
    const auto w = v + link.scaled(2);
    EXPECT_EQ(strip_vertex_linking(w), v);
    EXPECT_EQ(strip_vertex_linking(strip_vertex_linking(w)), strip_vertex_linking(w));
  }
}

TEST(Properties, SumsAndMultiplesStayMatching) {
  std::mt19937 rng(3);
  for (const auto& name : kTables) {
    const auto tri = data(name);
    const auto list = enumerate_admissible(tri, 1);
    for (int trial = 0; trial < 30 && !list.empty(); ++trial) {
      const auto& a = list[rng() % list.size()];
      const auto& b = list[rng() % list.size()];
      EXPECT_TRUE(satisfies_matching(tri, a + b));
      EXPECT_TRUE(oracle::matching_holds(tri, a.scaled(static_cast<std::int64_t>(1 + rng() % 5)).coords()));
      // The sum is admissible exactly when the quad types agree.
      bool compatible = true;
      for (int t = 0; t < tri.size(); ++t)
        if (a.quad_type(t) >= 0 && b.quad_type(t) >= 0 && a.quad_type(t) != b.quad_type(t)) compatible = false;
      EXPECT_EQ(is_admissible(tri, a + b), compatible);
    }
  }
}

TEST(Matching, LoneTriangleIsNotNormal) {
  const auto tri = data("two_tet_a.tri");
  for (int i = 0; i < 14; ++i) {
    if (i % 7 >= 4) continue;
    auto x = std::vector<std::int64_t>(14, 0);
    x[static_cast<std::size_t>(i)] = 1;
    EXPECT_FALSE(satisfies_matching(tri, NormalSurfaceVector(x)));
    EXPECT_FALSE(oracle::matching_holds(tri, x));
  }
  EXPECT_TRUE(satisfies_matching(tri, NormalSurfaceVector::zero(2)));
}

TEST(BuildSurface, DoubledLinkIsTwoSpheres) {
  const auto tri = data("three_tet_b.tri");
  const auto two = vertex_link(tri).scaled(2);
  EXPECT_TRUE(is_admissible(tri, two));
  const auto s = build_surface(tri, two);
  ASSERT_EQ(s.components.size(), 2u);
  for (const auto& c : s.components) {
    EXPECT_EQ(c.euler_char, 2);
    EXPECT_TRUE(c.two_sided);
  }
}

TEST(StripVertexLink, LinkPlusQuadSurface) {
  const auto tri = data("two_tet_a.tri");
  const auto quad = parse_surface("0 0 0 0 2 0 0 0 0 1 1 1 0 0");
  ASSERT_TRUE(is_admissible(tri, quad));
  const auto stripped = strip_vertex_linking(quad + vertex_link(tri));
  EXPECT_EQ(stripped, quad);
  EXPECT_TRUE(is_admissible(tri, stripped));
  EXPECT_TRUE(strip_vertex_linking(NormalSurfaceVector::zero(2)).is_zero());
}
