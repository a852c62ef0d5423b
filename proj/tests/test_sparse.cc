#include <gtest/gtest.h>

#include "dequant/instances.hh"
#include "dequant/oracle.hh"
#include "dequant/sparse.hh"

using namespace dequant;

namespace {

QueryFn query_of(const Vec& v) {
  return [v](Index i) { return v(i); };
}

}  // namespace

TEST(SparseMatrix, BuildAndSumDuplicates) {
  SparseMatrix a(3, 4);
  a.add(0, 1, 2.0);
  a.add(0, 1, 1.0);
  a.add(2, 3, Complex(0, 1));
  EXPECT_EQ(a.row(0).size(), 1u);
  EXPECT_EQ(a.row(0)[0].value, Complex(3.0));
  EXPECT_EQ(a.col(3)[0].index, 2);
  EXPECT_EQ(a.sparsity(), 1);
  const Mat d = a.dense();
  EXPECT_EQ(d(0, 1), Complex(3.0));
  EXPECT_EQ(d(2, 3), Complex(0, 1));
  EXPECT_LT((SparseMatrix::from_dense(d).dense() - d).norm(), 1e-15);
}

TEST(SparsePolyQuery, IdentityMatrix) {
  SparseMatrix id = SparseMatrix::from_dense(Mat::Identity(5, 5));
  const EvenPolynomial p({0.2, 0.5, 0.3});
  Rng rng(1);
  const Vec u = gaussian_vector(5, rng);
  for (Index j = 0; j < 5; ++j) EXPECT_NEAR(std::abs(sparse_poly_query(id, query_of(u), p, j, 1) - u(j)), 0.0, 1e-14);
}

TEST(SparsePolyQuery, PermutationMatrix) {
  Mat perm = Mat::Zero(4, 4);
  perm(0, 2) = perm(1, 0) = perm(2, 3) = perm(3, 1) = 1.0;
  const EvenPolynomial p({0.0, 0.7});
  Rng rng(2);
  const Vec u = gaussian_vector(4, rng, true);
  for (Index j = 0; j < 4; ++j)
    EXPECT_NEAR(std::abs(sparse_poly_query(SparseMatrix::from_dense(perm), query_of(u), p, j, 1) - 0.7 * u(j)), 0.0,
                1e-14);
}

TEST(SparsePolyQuery, RandomSparseAgreesWithDense) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const SparseMatrix a = sparse_instance(30, 2, rng);
    EXPECT_LE(a.sparsity(), 2);
    const EvenPolynomial p({0.2, 0.5, 0.3});
    const Vec u = gaussian_vector(30, rng, true);
    const Vec dense = dense_svt(a.dense(), p) * u;
    for (Index j = 0; j < 30; ++j)
      EXPECT_NEAR(std::abs(sparse_poly_query(a, query_of(u), p, j, 2) - dense(j)), 0.0, 1e-10);
  }
}

TEST(SparsePolyQuery, SparsityViolationThrows) {
  const SparseMatrix a = SparseMatrix::from_dense(Mat::Ones(3, 3));
  EXPECT_THROW(sparse_poly_query(a, query_of(Vec::Ones(3)), EvenPolynomial({0.0, 1.0}), 0, 2), std::domain_error);
}

TEST(SparseInstance, UnitOperatorNorm) {
  Rng rng(4);
  const SparseMatrix a = sparse_instance(20, 3, rng);
  Eigen::JacobiSVD<Mat> svd(a.dense());
  EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-10);
}
