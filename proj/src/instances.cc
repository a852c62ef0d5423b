#include "dequant/instances.hh"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dequant {

double gaussian(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Mat gaussian_matrix(Index m, Index n, Rng& rng, bool complex) {
  Mat a(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = complex ? Complex(gaussian(rng), gaussian(rng)) : Complex(gaussian(rng));
  return a;
}

Vec gaussian_vector(Index n, Rng& rng, bool complex) { return gaussian_matrix(n, 1, rng, complex).col(0); }

Vec unit_vector(Index n, Rng& rng, bool complex) {
  Vec v = gaussian_vector(n, rng, complex);
  return v / v.norm();
}

namespace {

Mat orthonormal_columns(Index rows, Index k, Rng& rng, bool complex) {
  Eigen::HouseholderQR<Mat> qr(gaussian_matrix(rows, k, rng, complex));
  return qr.householderQ() * Mat::Identity(rows, k);
}

}  // namespace

Mat spectrum_matrix(Index m, Index n, const std::vector<double>& singular_values, Rng& rng, bool complex) {
  const auto k = static_cast<Index>(singular_values.size());
  if (k > std::min(m, n)) throw std::invalid_argument("spectrum_matrix: too many singular values");
  const Mat u = orthonormal_columns(m, k, rng, complex);
  const Mat v = orthonormal_columns(n, k, rng, complex);
  RealVec s(k);
  for (Index i = 0; i < k; ++i) s(i) = singular_values[static_cast<std::size_t>(i)];
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

Vec row_space_vector(const Mat& a, Index rank, Rng& rng) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinV);
  const Vec coeffs = gaussian_vector(rank, rng);
  Vec b = svd.matrixV().leftCols(rank) * coeffs;
  return b / b.norm();
}

Vec column_space_vector(const Mat& a, double sigma, Rng& rng) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  Index keep = 0;
  while (keep < svd.singularValues().size() && svd.singularValues()(keep) >= sigma) ++keep;
  if (keep == 0) throw std::domain_error("column_space_vector: no singular value >= sigma");
  Vec b = svd.matrixU().leftCols(keep) * gaussian_vector(keep, rng);
  return b / b.norm();
}

SparseMatrix sparse_instance(Index n, Index s, Rng& rng) {
  Mat a = Mat::Zero(n, n);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index t = 0; t < s; ++t) {
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (Index i = 0; i < n; ++i) a(i, perm[static_cast<std::size_t>(i)]) += gaussian(rng);
  }
  const double op = Eigen::JacobiSVD<Mat>(a).singularValues()(0);
  if (op > 0.0) a /= op;
  return SparseMatrix::from_dense(a);
}

}  // namespace dequant
