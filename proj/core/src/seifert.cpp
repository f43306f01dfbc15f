#include "gutscat/seifert.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <tuple>

#include "gutscat/error.hpp"

namespace gutscat {

std::int64_t SeifertInvariants::product() const {
  std::int64_t p = 1;
  for (auto x : a) p = checked_mul(p, x);
  return p;
}

std::vector<std::string> SeifertInvariants::violations() const {
  std::vector<std::string> out;
  if (a.size() != b.size()) {
    out.push_back("a and b differ in length");
    return out;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 2) out.push_back("a_" + std::to_string(i) + " < 2");
    if (b[i] <= 0 || b[i] >= a[i]) out.push_back("b_" + std::to_string(i) + " outside (0, a_i)");
    if (std::gcd(a[i], b[i]) != 1) out.push_back("gcd(a_i, b_i) != 1 at " + std::to_string(i));
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (std::gcd(a[i], a[j]) != 1) out.push_back("a_" + std::to_string(i) + ", a_" + std::to_string(j) + " not coprime");
  }
  if (!out.empty()) return out;
  const Rational prod(product());
  if (e0 != Rational(sign) / prod) out.push_back("e0 != sign / prod a");
  Rational total = e0;
  for (std::size_t i = 0; i < a.size(); ++i) total += Rational(b[i]) / a[i];
  if (boost::multiprecision::denominator(total) != 1) out.push_back("e0 + sum b_i/a_i is not an integer");
  if (abs(e0 * prod) != 1) out.push_back("|e0 prod a| != 1");
  return out;
}

namespace {

void require_coprime(const std::vector<std::int64_t>& a) {
  if (a.size() < 3) throw DomainError("need at least three exceptional fibres");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 2) throw DomainError("multiplicities must be at least 2");
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (std::gcd(a[i], a[j]) != 1)
        throw DomainError("multiplicities " + std::to_string(a[i]) + " and " + std::to_string(a[j]) + " are not coprime");
  }
}

// x with k * x = 1 (mod m), for gcd(k, m) = 1.
std::int64_t inverse_mod(std::int64_t k, std::int64_t m) {
  std::int64_t r0 = m, r1 = ((k % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - t * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - t * s1};
  }
  if (r0 != 1) throw InternalError("no modular inverse");
  return ((s0 % m) + m) % m;
}

}  // namespace

SeifertInvariants homology_sphere_invariants(const std::vector<std::int64_t>& a, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  require_coprime(a);
  SeifertInvariants inv;
  inv.a = a;
  inv.sign = sign;
  const std::int64_t prod = inv.product();
  for (auto ai : a) {
    const std::int64_t rest = (prod / ai) % ai;
    const std::int64_t target = ((-sign % ai) + ai) % ai;
    const std::int64_t bi = static_cast<std::int64_t>((static_cast<__int128>(target) * inverse_mod(rest, ai)) % ai);
    inv.b.push_back(bi);
  }
  inv.e0 = Rational(sign) / prod;
  if (const auto bad = inv.violations(); !bad.empty()) throw InternalError("constructed invariants fail: " + bad.front());
  return inv;
}

Rational orbifold_euler(const std::vector<std::int64_t>& a) {
  Rational chi = 2;
  for (auto ai : a) {
    if (ai < 1) throw DomainError("cone order must be positive");
    chi -= 1 - Rational(1, ai);
  }
  return chi;
}

BigInt torsion_order(const SeifertInvariants& inv) {
  const Rational t = abs(inv.e0 * Rational(inv.product()));
  if (boost::multiprecision::denominator(t) != 1) throw DomainError("|e0 prod a| is not an integer");
  return boost::multiprecision::numerator(t);
}

Rational seifert_volume(const SeifertInvariants& inv) {
  const Rational chi = orbifold_euler(inv.a);
  if (chi >= 0) throw DomainError("base orbifold has chi(B) = " + to_string(chi) + " >= 0; no SV formula");
  if (inv.e0 == 0) throw DomainError("e0 = 0");
  return abs(chi * chi / inv.e0);
}

std::int64_t census_product_bound(const Rational& sv_bound) {
  if (sv_bound <= 0) throw DomainError("SV bound must be positive");
  const Rational p = Rational(42 * 42) * sv_bound;
  const BigInt fl = boost::multiprecision::numerator(p) / boost::multiprecision::denominator(p);
  if (fl > INT64_MAX) throw GuardError("product bound overflows");
  return static_cast<std::int64_t>(fl);
}

namespace {

// Pairwise coprime increasing tuples starting at first, extended while the
// product stays within limit.
void extend(std::vector<std::int64_t>& cur, std::int64_t prod, std::int64_t limit, std::vector<std::vector<std::int64_t>>& out) {
  if (cur.size() >= 3 && orbifold_euler(cur) < 0) out.push_back(cur);
  for (std::int64_t x = cur.back() + 1; prod <= limit / x; ++x) {
    if (std::gcd(prod, x) != 1) continue;
    cur.push_back(x);
    extend(cur, prod * x, limit, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<CensusEntry> census(const Rational& sv_bound, const CensusOptions& opts) {
  const std::int64_t limit = census_product_bound(sv_bound);
  if (limit > opts.max_product)
    throw GuardError("census product bound " + std::to_string(limit) + " exceeds the guard " +
                     std::to_string(opts.max_product));
  // Smallest elements a_1 with a_1 * (a_1 + 1) * (a_1 + 2) <= limit.
  std::vector<std::int64_t> firsts;
  for (std::int64_t x = 2; x <= limit / (x + 1) && x * (x + 1) <= limit / (x + 2); ++x) firsts.push_back(x);
  std::vector<std::vector<std::vector<std::int64_t>>> found(firsts.size());
  const auto work = [&](std::size_t i) {
    std::vector<std::int64_t> cur{firsts[i]};
    extend(cur, firsts[i], limit, found[i]);
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || firsts.size() < 2) {
    for (std::size_t i = 0; i < firsts.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < firsts.size(); i += static_cast<std::size_t>(threads)) work(i);
      });
    for (auto& th : pool) th.join();
  }
  std::vector<CensusEntry> out;
  for (const auto& part : found)
    for (const auto& a : part)
      for (int sign : {-1, 1}) {
        CensusEntry e;
        e.invariants = homology_sphere_invariants(a, sign);
        e.chi_b = orbifold_euler(a);
        e.sv = seifert_volume(e.invariants);
        e.product_a = e.invariants.product();
        out.push_back(std::move(e));
      }
  std::sort(out.begin(), out.end(), [](const CensusEntry& x, const CensusEntry& y) {
    return std::tie(x.product_a, x.invariants.a, x.invariants.sign) < std::tie(y.product_a, y.invariants.a, y.invariants.sign);
  });
  return out;
}

Rational horizontal_euler(const Rational& chi_orbifold, std::int64_t d) {
  if (d == 0) throw DomainError("degree must be non-zero");
  return Rational(d < 0 ? -d : d) * chi_orbifold;
}

}  // namespace gutscat
