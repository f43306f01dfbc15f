#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gutscat/exact.hpp"

namespace gutscat {

/// Integer matrix stored by rows; rows index the target basis, columns the
/// source basis.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// Adds v to entry (r, c).
  void add(int r, int c, std::int64_t v);
  std::int64_t at(int r, int c) const;
  const std::map<int, std::int64_t>& row(int r) const { return data_[static_cast<std::size_t>(r)]; }
  std::size_t nonzeros() const;

  SparseMatrix transposed() const;
  /// Appends a row and returns its index.
  int add_row();
  /// Appends a column and returns its index.
  int add_col() { return cols_++; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::map<int, std::int64_t>> data_;
};

/// The non-zero invariant factors d_1 | d_2 | ... | d_r of the Smith form.
/// Runs in 64-bit arithmetic and transparently retries with arbitrary
/// precision on overflow.
std::vector<BigInt> invariant_factors(const SparseMatrix& m);

int matrix_rank(const SparseMatrix& m);

/// A finitely generated abelian group Z^rank + sum Z/torsion_i.
struct HomologyGroup {
  int rank = 0;
  std::vector<BigInt> torsion;  // divisibility order, each > 1

  bool trivial() const { return rank == 0 && torsion.empty(); }
  /// Order of the torsion subgroup.
  BigInt torsion_order() const;
  std::string str() const;
  bool operator==(const HomologyGroup&) const = default;
};

/// Homology at C_k given dim C_k, d_k : C_k -> C_{k-1} and d_{k+1}.
HomologyGroup homology_at(int dim_k, const SparseMatrix& d_k, const SparseMatrix& d_k1);

/// Z^generators modulo the row span of relations.
HomologyGroup cokernel(const SparseMatrix& relations);

/// A Z-basis of {x : m x = 0}, by unimodular column reduction.
std::vector<std::vector<BigInt>> integer_kernel(const SparseMatrix& m);

}  // namespace gutscat
