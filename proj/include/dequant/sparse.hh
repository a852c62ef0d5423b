#pragma once

#include <vector>

#include "dequant/polynomial.hh"
#include "dequant/types.hh"

namespace dequant {

struct SparseEntry {
  Index index;  // column for row lists, row for column lists
  Complex value;
};

/// Row- and column-indexed nonzero pattern of a matrix.
class SparseMatrix {
 public:
  SparseMatrix(Index rows, Index cols);
  static SparseMatrix from_dense(const Mat& a, double drop_tol = 0.0);

  void add(Index i, Index j, Complex value);  // entries are summed

  Index rows() const { return static_cast<Index>(row_lists_.size()); }
  Index cols() const { return static_cast<Index>(col_lists_.size()); }
  const std::vector<SparseEntry>& row(Index i) const { return row_lists_[static_cast<std::size_t>(i)]; }
  const std::vector<SparseEntry>& col(Index j) const { return col_lists_[static_cast<std::size_t>(j)]; }
  /// Largest nonzero count over all rows and columns.
  Index sparsity() const;
  Mat dense() const;

 private:
  std::vector<std::vector<SparseEntry>> row_lists_;
  std::vector<std::vector<SparseEntry>> col_lists_;
};

/// Entry j of p(sqrt(A^dag A)) u = sum_k a_{2k} (A^dag A)^k u, by expanding
/// row j of (A^dag A)^k over the nonzero pattern (at most s^(2k) terms).
/// Throws std::domain_error if A has more than `sparsity` nonzeros in a row or column.
Complex sparse_poly_query(const SparseMatrix& a, const QueryFn& u, const EvenPolynomial& p, Index j, Index sparsity);

}  // namespace dequant
