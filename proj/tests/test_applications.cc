#include <gtest/gtest.h>

#include <cmath>

#include "dequant/applications.hh"
#include "dequant/instances.hh"
#include "dequant/oracle.hh"

using namespace dequant;

namespace {

OversampledMatrixAccess matrix_of(const Mat& m) { return exact_oversampled(build_matrix_access(m)); }
OversampledVectorAccess vector_of(const Vec& v) { return exact_oversampled(build_exact_vector_access(v)); }
QueryFn query_of(const Vec& v) {
  return [v](Index i) { return v(i); };
}

}  // namespace

TEST(Qsvt, ConstantPolynomialReturnsB) {
  Rng rng(1);
  const Mat a = spectrum_matrix(10, 8, {0.8, 0.6}, rng);
  const Vec b = unit_vector(8, rng);
  QsvtParams qp;
  qp.norm_lower_bound = 0.5;
  const auto res = qsvt_lowrank(matrix_of(a), vector_of(b), EvenPolynomial({0.5}), qp, rng);
  EXPECT_FALSE(res.svt.has_value());
  EXPECT_LT((res.materialize() - 0.5 * b).norm(), 1e-14);
}

TEST(Qsvt, SquarePolynomialOnRankFive) {
  Rng rng(2);
  int pass = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const Mat a = spectrum_matrix(50, 40, {0.8, 0.4, 0.3, 0.2, 0.2}, rng);
    const EvenPolynomial p({0.0, 1.0});
    const Mat transform = dense_svt(a, p);
    Vec b = row_space_vector(a, 5, rng);
    while ((transform * b).norm() < 0.2) b = row_space_vector(a, 5, rng);
    const Vec target = transform * b;
    QsvtParams qp;
    qp.norm_lower_bound = target.norm();
    qp.r = 2000;
    qp.c = 4000;
    qp.r_joint = 10000;
    qp.enforce_epsilon = false;
    const auto res = qsvt_lowrank(matrix_of(a), vector_of(b), p, qp, rng);
    pass += (res.materialize() - target).norm() <= qp.eta * target.norm();
  }
  EXPECT_GE(pass, 9);
}

TEST(Qsvt, RejectsNonPositiveLowerBound) {
  Rng rng(3);
  const Mat a = Mat::Identity(3, 3) / std::sqrt(3.0);
  QsvtParams qp;
  EXPECT_THROW(qsvt_lowrank(matrix_of(a), vector_of(Vec(Vec::Ones(3) / std::sqrt(3.0))), EvenPolynomial({0.0, 1.0}), qp, rng),
               std::domain_error);
}

TEST(Qsvt, EpsilonBoundShrinksWithDegree) {
  EXPECT_GT(qsvt_epsilon_bound(1.0, 2, 0.1, 0.1, 0.5), qsvt_epsilon_bound(1.0, 4, 0.1, 0.1, 0.5));
  EXPECT_GT(qsvt_epsilon_bound(1.0, 2, 0.1, 0.1, 0.5), qsvt_epsilon_bound(2.0, 2, 0.1, 0.1, 0.5));
}

TEST(SparseQsvt, IdentityExamples) {
  Rng rng(4);
  const SparseMatrix id = SparseMatrix::from_dense(Mat::Identity(10, 10));
  const EvenPolynomial p({0.0, 1.0});
  SparseQsvtParams sp;
  sp.xi = 0.05;
  const Vec u = unit_vector(10, rng);
  const auto same = sparse_qsvt(id, query_of(u), *build_exact_vector_access(u), p, sp, rng);
  EXPECT_LE(std::abs(same.estimate - 1.0), sp.eta);
  Vec e1 = Vec::Zero(10), e2 = Vec::Zero(10);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const auto orth = sparse_qsvt(id, query_of(e1), *build_exact_vector_access(e2), p, sp, rng);
  EXPECT_LE(std::abs(orth.estimate), sp.eta);
  EXPECT_NEAR(same.epsilon_bound, sp.eta * sp.eta / 9.0, 1e-15);
  EXPECT_NEAR(same.stated_epsilon_bound, sp.eta / 9.0, 1e-15);
}

TEST(SparseQsvt, RandomSparseWithinEta) {
  Rng rng(5);
  int pass = 0;
  for (int t = 0; t < 20; ++t) {
    const SparseMatrix a = sparse_instance(30, 2, rng);
    const EvenPolynomial p({0.2, 0.5, 0.3});
    const Vec u = unit_vector(30, rng), v = unit_vector(30, rng);
    SparseQsvtParams sp;
    sp.xi = 0.05;
    const auto res = sparse_qsvt(a, query_of(u), *build_exact_vector_access(v), p, sp, rng);
    pass += std::abs(res.estimate - (v.adjoint() * dense_svt(a.dense(), p) * u)(0)) <= sp.eta;
    EXPECT_LE(res.distinct_queries, 30);
  }
  EXPECT_GE(pass, 19);
}

TEST(Clustering, LiftIdentities) {
  Rng rng(6);
  Mat m = gaussian_matrix(6, 4, rng);
  m.row(2).setZero();
  const Vec w = gaussian_vector(6, rng);
  const auto lift = make_clustering_lift(build_matrix_access(m), w);
  EXPECT_NEAR(lift.u_norm, m.squaredNorm(), 1e-12);
  const Index size = 6 * 4 * 6;
  ASSERT_EQ(lift.u->size(), size);
  Complex dot = 0.0;
  double v_sq = 0.0, u_sq = 0.0;
  for (Index k = 0; k < size; ++k) {
    dot += lift.u->query(k) * std::conj(lift.v(k));
    v_sq += std::norm(lift.v(k));
    u_sq += std::norm(lift.u->query(k));
  }
  EXPECT_NEAR(std::abs(dot - (w.transpose() * m).squaredNorm()), 0.0, 1e-10);
  EXPECT_NEAR(std::sqrt(v_sq), lift.v_norm, 1e-10);
  EXPECT_NEAR(std::sqrt(u_sq), lift.u_norm, 1e-10);
}

TEST(Clustering, IdentityAndZeroWeights) {
  Rng rng(7);
  ClusteringParams cp;
  cp.xi = 0.05;
  const auto id = supervised_clustering(build_matrix_access(Mat::Identity(2, 2)), Vec::Ones(2), cp, rng);
  EXPECT_LE(std::abs(id.estimate - 2.0), 4.0 * cp.eta);
  const auto zero = supervised_clustering(build_matrix_access(Mat::Identity(2, 2)), Vec::Zero(2), cp, rng);
  EXPECT_EQ(zero.estimate, 0.0);
  EXPECT_THROW(supervised_clustering(build_matrix_access(Mat::Zero(2, 2)), Vec::Ones(2), cp, rng),
               std::domain_error);
}

TEST(Recommendation, RankOneKeepsRow) {
  Rng rng(8);
  const Mat a = spectrum_matrix(20, 15, {1.0}, rng);
  RecommendationParams rp;
  rp.sigma = 0.5;
  rp.r = 500;
  rp.c = 1000;
  rp.r_joint = 2000;
  rp.enforce_epsilon = false;
  Index row = 0;
  a.rowwise().norm().maxCoeff(&row);
  const auto res = recommendation_sample(matrix_of(a), row, rp, rng);
  EXPECT_LE((res.approx_row - a.row(row).transpose()).norm(), rp.nu * a.norm());
  ASSERT_TRUE(res.sample.has_value());
  EXPECT_LT(*res.sample, 15);
}

TEST(Recommendation, AllBelowThresholdIsDegenerate) {
  Rng rng(9);
  const Mat a = spectrum_matrix(20, 15, {0.3, 0.2}, rng);
  RecommendationParams rp;
  rp.sigma = 1.5;
  rp.r = 100;
  rp.c = 100;
  rp.r_joint = 100;
  rp.enforce_epsilon = false;
  EXPECT_THROW(recommendation_sample(matrix_of(Mat(a / a.norm())), 0, rp, rng), std::domain_error);
}

TEST(Inversion, DiagonalRetainedSpace) {
  Rng rng(10);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 0.1;
  Vec b = Vec::Zero(2);
  b(0) = 1.0;
  InversionParams ip;
  ip.sigma = 0.5;
  ip.r = 200;
  ip.c = 200;
  ip.bilinear_xi = 0.05;
  ip.enforce_epsilon = false;
  const auto res = matrix_inversion(matrix_of(Mat(a / a.norm())), b, ip, rng);
  const Vec target = std::get<Mat>(exact_truncation(a / a.norm(), ip.sigma, ip.xi, TruncationMode::PseudoInverse)) * b;
  EXPECT_LE((res.solution - target).norm(), ip.eta * target.norm());
}

TEST(Inversion, RejectsRightHandSideOutsideRetainedSpace) {
  Rng rng(11);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 0.1;
  Vec b = Vec::Ones(2);
  InversionParams ip;
  ip.r = 50;
  ip.c = 50;
  ip.enforce_epsilon = false;
  EXPECT_THROW(matrix_inversion(matrix_of(Mat(a / a.norm())), b, ip, rng), std::domain_error);
}
