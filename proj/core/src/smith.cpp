#include "gutscat/smith.hpp"

#include <algorithm>
#include <set>

namespace gutscat {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows)) {
  if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
}

void SparseMatrix::add(int r, int c, std::int64_t v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw InternalError("matrix index out of range");
  if (v == 0) return;
  auto& row = data_[static_cast<std::size_t>(r)];
  auto [it, inserted] = row.emplace(c, v);
  if (!inserted) {
    it->second = checked_add(it->second, v);
    if (it->second == 0) row.erase(it);
  }
}

std::int64_t SparseMatrix::at(int r, int c) const {
  const auto& row = data_[static_cast<std::size_t>(r)];
  const auto it = row.find(c);
  return it == row.end() ? 0 : it->second;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (auto [c, v] : data_[static_cast<std::size_t>(r)]) t.add(c, r, v);
  return t;
}

int SparseMatrix::add_row() {
  data_.emplace_back();
  return rows_++;
}

namespace {

struct Overflow {};

template <typename T>
struct Arith;

template <>
struct Arith<std::int64_t> {
  static std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b) {
    std::int64_t prod = 0, out = 0;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
  }
  static std::int64_t abs(std::int64_t a) {
    if (a == INT64_MIN) throw Overflow{};
    return a < 0 ? -a : a;
  }
  static BigInt big(std::int64_t a) { return BigInt(a); }
};

template <>
struct Arith<BigInt> {
  static BigInt sub_mul(const BigInt& a, const BigInt& q, const BigInt& b) { return a - q * b; }
  static BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
  static BigInt big(const BigInt& a) { return a; }
};

// Elimination with row and column operations. The pivot is always the
// entry of least absolute value (ties broken by fewest competitors, then by
// row and column index), which keeps the run deterministic.
template <typename T>
std::vector<BigInt> diagonalize(const SparseMatrix& m) {
  using A = Arith<T>;
  std::vector<std::map<int, T>> rows(static_cast<std::size_t>(m.rows()));
  std::vector<std::set<int>> cols(static_cast<std::size_t>(m.cols()));
  for (int r = 0; r < m.rows(); ++r)
    for (auto [c, v] : m.row(r)) {
      rows[static_cast<std::size_t>(r)].emplace(c, T(v));
      cols[static_cast<std::size_t>(c)].insert(r);
    }
  std::set<int> live_rows;
  for (int r = 0; r < m.rows(); ++r)
    if (!rows[static_cast<std::size_t>(r)].empty()) live_rows.insert(r);

  const auto set_entry = [&](int r, int c, const T& v) {
    auto& row = rows[static_cast<std::size_t>(r)];
    if (v == 0) {
      row.erase(c);
      cols[static_cast<std::size_t>(c)].erase(r);
      if (row.empty()) live_rows.erase(r);
    } else {
      row[c] = v;
      cols[static_cast<std::size_t>(c)].insert(r);
      live_rows.insert(r);
    }
  };

  std::vector<BigInt> diag;
  while (!live_rows.empty()) {
    int pr = -1, pc = -1;
    T best{};
    std::size_t best_cost = 0;
    for (int r : live_rows) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      for (const auto& [c, v] : row) {
        const T av = A::abs(v);
        const std::size_t cost = (row.size() - 1) * (cols[static_cast<std::size_t>(c)].size() - 1);
        if (pr < 0 || av < best || (av == best && cost < best_cost)) {
          pr = r;
          pc = c;
          best = av;
          best_cost = cost;
        }
      }
      if (best == 1 && best_cost == 0) break;
    }
    const T p = rows[static_cast<std::size_t>(pr)].at(pc);
    // Clear the pivot column by row operations.
    bool remainder = false;
    const std::vector<int> others(cols[static_cast<std::size_t>(pc)].begin(), cols[static_cast<std::size_t>(pc)].end());
    const auto pivot_row = rows[static_cast<std::size_t>(pr)];
    for (int r : others) {
      if (r == pr) continue;
      const T q = rows[static_cast<std::size_t>(r)].at(pc) / p;
      if (q == 0) {
        remainder = true;
        continue;
      }
      for (const auto& [c, v] : pivot_row) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        const auto it = row.find(c);
        const T cur = it == row.end() ? T(0) : it->second;
        set_entry(r, c, A::sub_mul(cur, q, v));
      }
      if (rows[static_cast<std::size_t>(r)].count(pc)) remainder = true;
    }
    if (remainder) continue;
    // The column now holds only the pivot; clear the pivot row by column
    // operations, which touch no other row.
    const std::vector<std::pair<int, T>> entries(pivot_row.begin(), pivot_row.end());
    for (const auto& [c, v] : entries) {
      if (c == pc) continue;
      const T q = v / p;
      const T rest = A::sub_mul(v, q, p);
      set_entry(pr, c, rest);
      if (rest != 0) remainder = true;
    }
    if (remainder) continue;
    diag.push_back(A::big(A::abs(p)));
    set_entry(pr, pc, T(0));
  }
  return diag;
}

// Rewrites a diagonal as a divisibility chain: only the entries > 1 need
// work since gcd(1, x) = 1 and lcm(1, x) = x.
std::vector<BigInt> to_chain(std::vector<BigInt> diag) {
  std::vector<BigInt> ones, big;
  for (auto& d : diag) (d == 1 ? ones : big).push_back(std::move(d));
  for (std::size_t i = 0; i < big.size(); ++i)
    for (std::size_t j = i + 1; j < big.size(); ++j) {
      const BigInt g = boost::multiprecision::gcd(big[i], big[j]);
      const BigInt l = big[i] / g * big[j];
      big[i] = g;
      big[j] = l;
    }
  std::sort(big.begin(), big.end());
  for (auto& b : big) ones.push_back(std::move(b));
  return ones;
}

}  // namespace

std::vector<BigInt> invariant_factors(const SparseMatrix& m) {
  std::vector<BigInt> diag;
  try {
    diag = diagonalize<std::int64_t>(m);
  } catch (const Overflow&) {
    diag = diagonalize<BigInt>(m);
  }
  return to_chain(std::move(diag));
}

int matrix_rank(const SparseMatrix& m) { return static_cast<int>(invariant_factors(m).size()); }

BigInt HomologyGroup::torsion_order() const {
  BigInt out = 1;
  for (const auto& t : torsion) out *= t;
  return out;
}

std::string HomologyGroup::str() const {
  if (trivial()) return "0";
  std::string out;
  if (rank > 0) out = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  for (const auto& t : torsion) {
    if (!out.empty()) out += " + ";
    out += "Z/" + t.str();
  }
  return out;
}

HomologyGroup homology_at(int dim_k, const SparseMatrix& d_k, const SparseMatrix& d_k1) {
  const int rank_k = d_k.rows() == 0 || d_k.cols() == 0 ? 0 : matrix_rank(d_k);
  const auto factors = invariant_factors(d_k1);
  HomologyGroup h;
  h.rank = dim_k - rank_k - static_cast<int>(factors.size());
  if (h.rank < 0) throw InternalError("negative Betti number: boundary maps do not compose to zero");
  for (const auto& f : factors)
    if (f > 1) h.torsion.push_back(f);
  return h;
}

HomologyGroup cokernel(const SparseMatrix& relations) {
  const auto factors = invariant_factors(relations);
  HomologyGroup h;
  h.rank = relations.cols() - static_cast<int>(factors.size());
  for (const auto& f : factors)
    if (f > 1) h.torsion.push_back(f);
  return h;
}

std::vector<std::vector<BigInt>> integer_kernel(const SparseMatrix& m) {
  const auto rows = static_cast<std::size_t>(m.rows()), cols = static_cast<std::size_t>(m.cols());
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (auto [c, v] : m.row(static_cast<int>(r))) a[r][static_cast<std::size_t>(c)] = v;
  // u tracks the column operations; columns of a are columns of m * u.
  std::vector<std::vector<BigInt>> u(cols, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  const auto axpy = [&](std::size_t dst, std::size_t src, const BigInt& q) {  // col dst -= q * col src
    for (std::size_t r = 0; r < rows; ++r)
      if (a[r][src] != 0) a[r][dst] -= q * a[r][src];
    for (std::size_t r = 0; r < cols; ++r)
      if (u[r][src] != 0) u[r][dst] -= q * u[r][src];
  };
  const auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (auto& row : a) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };
  std::size_t pivot = 0;
  for (std::size_t r = 0; r < rows && pivot < cols; ++r) {
    while (true) {
      // Smallest non-zero entry of row r at or right of the pivot column.
      std::size_t best = cols;
      for (std::size_t c = pivot; c < cols; ++c)
        if (a[r][c] != 0 && (best == cols || abs(a[r][c]) < abs(a[r][best]))) best = c;
      if (best == cols) break;
      swap_cols(pivot, best);
      bool clean = true;
      for (std::size_t c = pivot + 1; c < cols; ++c)
        if (a[r][c] != 0) {
          axpy(c, pivot, a[r][c] / a[r][pivot]);
          clean = clean && a[r][c] == 0;
        }
      if (clean) {
        ++pivot;
        break;
      }
    }
  }
  std::vector<std::vector<BigInt>> out;
  for (std::size_t c = pivot; c < cols; ++c) {
    std::vector<BigInt> v(cols);
    for (std::size_t r = 0; r < cols; ++r) v[r] = u[r][c];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace gutscat
