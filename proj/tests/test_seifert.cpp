#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "gutscat/error.hpp"
#include "gutscat/seifert.hpp"
#include "oracles.hpp"

using namespace gutscat;

namespace {

// b_i in (0, a_i) and e in [-2, 2] with |e * prod - sum b_i prod_{j != i} a_j| = 1,
// searched over all choices.
std::vector<std::tuple<std::vector<std::int64_t>, std::int64_t, std::int64_t>> brute_b(const std::vector<std::int64_t>& a) {
  std::int64_t prod = 1;
  for (auto x : a) prod *= x;
  std::vector<std::tuple<std::vector<std::int64_t>, std::int64_t, std::int64_t>> out;
  std::vector<std::int64_t> b(a.size(), 1);
  while (true) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += b[i] * (prod / a[i]);
    for (std::int64_t e = -2; e <= 2; ++e) {
      const std::int64_t diff = e * prod - sum;
      if (diff == 1 || diff == -1) out.emplace_back(b, e, diff);
    }
    std::size_t i = 0;
    while (i < a.size() && b[i] == a[i] - 1) b[i++] = 1;
    if (i == a.size()) break;
    ++b[i];
  }
  return out;
}

}  // namespace

TEST(Invariants, PoincareSphere) {
  const auto inv = homology_sphere_invariants({2, 3, 5}, -1);
  EXPECT_EQ(inv.b, (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_EQ(inv.e0, Rational(-1, 30));
  EXPECT_TRUE(inv.violations().empty());
  // The oracle: sum b_i prod_{j != i} a_j = 15 + 10 + 6 = 31 and e = 1.
  bool found = false;
  for (const auto& [b, e, diff] : brute_b({2, 3, 5}))
    if (b == inv.b && e == 1) found = diff == -1;
  EXPECT_TRUE(found);
}

TEST(Invariants, Brieskorn237) {
  const auto inv = homology_sphere_invariants({2, 3, 7}, 1);
  EXPECT_EQ(inv.b, (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_EQ(inv.e0, Rational(1, 42));
  bool found = false;
  for (const auto& [b, e, diff] : brute_b({2, 3, 7}))
    if (b == inv.b && e == 1) found = diff == 1;
  EXPECT_TRUE(found);
}

TEST(Invariants, AgreeWithBruteForceOnTriples) {
  for (const auto& a : std::vector<std::vector<std::int64_t>>{{2, 3, 5}, {2, 3, 7}, {2, 5, 7}, {3, 4, 5}, {2, 3, 11}}) {
    std::int64_t prod = 1;
    for (auto x : a) prod *= x;
    for (int sign : {-1, 1}) {
      const auto inv = homology_sphere_invariants(a, sign);
      EXPECT_EQ(inv.e0, Rational(sign, prod));
      EXPECT_EQ(torsion_order(inv), 1);
      // e0 = -(sum b_i / a_i) + e for the brute-force e.
      Rational s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += Rational(inv.b[i], a[i]);
      bool found = false;
      for (const auto& [b, e, diff] : brute_b(a))
        if (b == inv.b) found = found || Rational(e) - s == inv.e0;
      EXPECT_TRUE(found);
    }
  }
}

TEST(Invariants, Errors) {
  EXPECT_THROW(homology_sphere_invariants({2, 4, 5}, 1), DomainError);
  EXPECT_THROW(homology_sphere_invariants({2, 3}, 1), DomainError);
  EXPECT_THROW(homology_sphere_invariants({1, 3, 5}, 1), DomainError);
  EXPECT_THROW(homology_sphere_invariants({2, 3, 5}, 0), DomainError);
}

TEST(OrbifoldEuler, Examples) {
  EXPECT_EQ(orbifold_euler({2, 3, 5}), Rational(1, 30));
  EXPECT_EQ(orbifold_euler({2, 3, 7}), Rational(-1, 42));
  EXPECT_EQ(orbifold_euler({2, 3, 6}), Rational(0));
}

TEST(Torsion, Orders) {
  EXPECT_EQ(torsion_order(homology_sphere_invariants({2, 3, 5}, -1)), 1);
  EXPECT_EQ(torsion_order(homology_sphere_invariants({2, 3, 7}, 1)), 1);
  SeifertInvariants bad;
  bad.a = {3, 5};
  bad.b = {1, 1};
  bad.e0 = Rational(2, 15);
  EXPECT_EQ(torsion_order(bad), 2);
  EXPECT_FALSE(bad.violations().empty());
}

TEST(Volume, Examples) {
  const auto v237 = seifert_volume(homology_sphere_invariants({2, 3, 7}, 1));
  EXPECT_EQ(v237, Rational(1, 42));
  EXPECT_EQ(Rational(42 * 42) * v237, Rational(42));
  EXPECT_THROW(seifert_volume(homology_sphere_invariants({2, 3, 5}, -1)), DomainError);
  const Rational chi = orbifold_euler({2, 3, 11});
  EXPECT_EQ(chi, Rational(-5, 66));
  EXPECT_EQ(seifert_volume(homology_sphere_invariants({2, 3, 11}, 1)), Rational(25, 66));
  EXPECT_EQ(chi * chi * 66, Rational(25, 66));
}

TEST(HorizontalEuler, Examples) {
  EXPECT_EQ(horizontal_euler(Rational(-1, 42), 42), Rational(-1));
  EXPECT_EQ(horizontal_euler(Rational(-1), 1), Rational(-1));
  EXPECT_EQ(horizontal_euler(Rational(-1, 6), -12), Rational(-2));
}

TEST(Census, OneOverFortyTwo) {
  const auto list = census(Rational(1, 42));
  ASSERT_EQ(list.size(), 2u);
  std::set<int> signs;
  for (const auto& e : list) {
    EXPECT_EQ(e.invariants.a, (std::vector<std::int64_t>{2, 3, 7}));
    EXPECT_EQ(e.product_a, 42);
    EXPECT_EQ(e.chi_b, Rational(-1, 42));
    signs.insert(e.invariants.sign);
  }
  EXPECT_EQ(signs, (std::set<int>{-1, 1}));
  EXPECT_EQ(census_product_bound(Rational(1, 42)), 42);
}

TEST(Census, OneOverHundredIsEmpty) {
  EXPECT_TRUE(census(Rational(1, 100)).empty());
  EXPECT_EQ(census_product_bound(Rational(1, 100)), 17);
}

TEST(Census, BoundOneMatchesBruteForce) {
  const auto list = census(Rational(1));
  std::set<oracle::CensusKey> got;
  for (const auto& e : list) {
    got.insert({e.invariants.a, e.invariants.b, e.invariants.sign});
    EXPECT_EQ(torsion_order(e.invariants), 1);
    EXPECT_LE(e.chi_b, Rational(-1, 42));
    EXPECT_LE(e.product_a, 1764);
    EXPECT_EQ(e.sv, e.chi_b * e.chi_b * e.product_a);
    EXPECT_TRUE(e.invariants.violations().empty());
  }
  EXPECT_EQ(got.size(), list.size());
  EXPECT_EQ(got, oracle::brute_census(1764));
}

TEST(Census, SignsComeInPairsAndOrderIsStable) {
  const auto list = census(Rational(1, 2));
  std::map<std::vector<std::int64_t>, std::set<int>> signs;
  for (const auto& e : list) signs[e.invariants.a].insert(e.invariants.sign);
  for (const auto& [a, s] : signs) EXPECT_EQ(s.size(), 2u);
  for (std::size_t i = 1; i < list.size(); ++i) {
    const auto& x = list[i - 1];
    const auto& y = list[i];
    EXPECT_LE(std::tie(x.product_a, x.invariants.a, x.invariants.sign),
              std::tie(y.product_a, y.invariants.a, y.invariants.sign));
  }
}

TEST(Census, ThreadsGiveTheSameList) {
  CensusOptions four;
  four.threads = 4;
  const auto a = census(Rational(1));
  const auto b = census(Rational(1), four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].invariants, b[i].invariants);
}

TEST(Census, GuardAndErrors) {
  CensusOptions small;
  small.max_product = 100;
  EXPECT_THROW(census(Rational(1), small), GuardError);
  EXPECT_THROW(census(Rational(-1)), DomainError);
}
