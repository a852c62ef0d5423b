#include "dequant/sparse.hh"

#include <map>
#include <stdexcept>

namespace dequant {

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : row_lists_(static_cast<std::size_t>(rows)), col_lists_(static_cast<std::size_t>(cols)) {}

SparseMatrix SparseMatrix::from_dense(const Mat& a, double drop_tol) {
  SparseMatrix s(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > drop_tol) s.add(i, j, a(i, j));
  return s;
}

void SparseMatrix::add(Index i, Index j, Complex value) {
  if (i < 0 || i >= rows() || j < 0 || j >= cols()) throw std::out_of_range("SparseMatrix::add: index out of range");
  auto& r = row_lists_[static_cast<std::size_t>(i)];
  for (auto& e : r)
    if (e.index == j) {
      e.value += value;
      for (auto& c : col_lists_[static_cast<std::size_t>(j)])
        if (c.index == i) c.value += value;
      return;
    }
  r.push_back({j, value});
  col_lists_[static_cast<std::size_t>(j)].push_back({i, value});
}

Index SparseMatrix::sparsity() const {
  std::size_t s = 0;
  for (const auto& r : row_lists_) s = std::max(s, r.size());
  for (const auto& c : col_lists_) s = std::max(s, c.size());
  return static_cast<Index>(s);
}

Mat SparseMatrix::dense() const {
  Mat a = Mat::Zero(rows(), cols());
  for (Index i = 0; i < rows(); ++i)
    for (const auto& e : row(i)) a(i, e.index) = e.value;
  return a;
}

Complex sparse_poly_query(const SparseMatrix& a, const QueryFn& u, const EvenPolynomial& p, Index j, Index sparsity) {
  if (a.sparsity() > sparsity) throw std::domain_error("sparse_poly_query: sparsity bound violated");
  if (j < 0 || j >= a.cols()) throw std::out_of_range("sparse_poly_query: index out of range");
  const auto& coeffs = p.even_coefficients();

  // Row j of (A^dag A)^k as an ordered sparse map; ordered so sums are reproducible.
  std::map<Index, Complex> row{{j, Complex(1.0)}};
  auto contract = [&u](const std::map<Index, Complex>& r) {
    Complex acc = 0.0;
    for (const auto& [l, c] : r) acc += c * u(l);
    return acc;
  };
  Complex result = coeffs[0] * contract(row);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    // next(l) = sum_m row(m) sum_i conj(A(i,m)) A(i,l)
    std::map<Index, Complex> next;
    for (const auto& [m, c] : row)
      for (const auto& ci : a.col(m)) {
        const Complex left = c * std::conj(ci.value);
        for (const auto& rl : a.row(ci.index)) next[rl.index] += left * rl.value;
      }
    row = std::move(next);
    if (coeffs[k] != 0.0) result += coeffs[k] * contract(row);
  }
  return result;
}

}  // namespace dequant
