#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gutscat/exact.hpp"

namespace gutscat {

/// (e0; b_1/a_1, ..., b_n/a_n) over a genus-0 orientable base.
struct SeifertInvariants {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
  Rational e0;
  int sign = 1;  // sign of e0

  std::int64_t product() const;
  /// Which of the homology-sphere conditions fail; empty when all hold.
  std::vector<std::string> violations() const;
  bool operator==(const SeifertInvariants&) const = default;
};

/// The unique b_i in (0, a_i) with b_i * prod_{j != i} a_j = -sign (mod a_i),
/// and e0 = sign / prod a_i. Requires n >= 3 pairwise coprime a_i >= 2.
SeifertInvariants homology_sphere_invariants(const std::vector<std::int64_t>& a, int sign);

/// 2 - sum (1 - 1/a_i).
Rational orbifold_euler(const std::vector<std::int64_t>& a);

/// |e0 * prod a_i|; throws DomainError when that is not an integer.
BigInt torsion_order(const SeifertInvariants& inv);

/// |chi(B)^2 / e0|; throws DomainError unless chi(B) < 0 and e0 != 0.
Rational seifert_volume(const SeifertInvariants& inv);

struct CensusEntry {
  SeifertInvariants invariants;
  Rational chi_b;
  Rational sv;
  std::int64_t product_a = 0;
};

struct CensusOptions {
  int threads = 1;
  /// Largest admissible product bound 42^2 * SV before GuardError.
  std::int64_t max_product = 50'000'000;
};

/// Every homology-sphere invariant set (both signs) with chi(B) < 0 and
/// prod a_i <= 42^2 * sv_bound, sorted by (prod a, a, sign).
std::vector<CensusEntry> census(const Rational& sv_bound, const CensusOptions& opts = {});

/// The largest product allowed by an SV bound: floor(42^2 * sv_bound).
std::int64_t census_product_bound(const Rational& sv_bound);

/// chi(F) = |d| * chi(O) for a horizontal surface of degree d.
Rational horizontal_euler(const Rational& chi_orbifold, std::int64_t d);

}  // namespace gutscat
