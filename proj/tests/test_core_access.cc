#include <gtest/gtest.h>

#include <cmath>

#include "dequant/core_access.hh"
#include "dequant/instances.hh"
#include "dequant/sampler.hh"

using namespace dequant;

namespace {

std::vector<double> empirical(const VectorAccess& a, Index draws, Rng& rng) {
  std::vector<double> counts(static_cast<std::size_t>(a.size()), 0.0);
  for (Index t = 0; t < draws; ++t) counts[static_cast<std::size_t>(a.sample(rng))] += 1.0;
  for (auto& c : counts) c /= static_cast<double>(draws);
  return counts;
}

}  // namespace

TEST(Rng, SplitStreamsAreReproducibleAndDistinct) {
  Rng root(42);
  Rng a = root.split(3), b = root.split(3), c = root.split(4);
  for (int k = 0; k < 8; ++k) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    EXPECT_NE(x, z);
  }
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) EXPECT_LT(rng.below(7), 7u);
}

TEST(WeightTree, ProbabilitiesAndSearch) {
  const std::vector<double> w{1.0, 0.0, 3.0, 4.0};
  WeightTree tree(w);
  EXPECT_DOUBLE_EQ(tree.total(), 8.0);
  EXPECT_DOUBLE_EQ(tree.probability(2), 3.0 / 8.0);
  EXPECT_EQ(tree.search(0.5), 0);
  EXPECT_EQ(tree.search(1.0), 2);  // zero-weight index skipped
  EXPECT_EQ(tree.search(3.99), 2);
  EXPECT_EQ(tree.search(4.0), 3);
  tree.set_weight(1, 2.0);
  EXPECT_DOUBLE_EQ(tree.total(), 10.0);
  EXPECT_EQ(tree.search(1.5), 1);
}

TEST(WeightTree, RejectsNegativeAndNan) {
  EXPECT_THROW(WeightTree(std::vector<double>{1.0, -1.0}), std::domain_error);
  EXPECT_THROW(WeightTree(std::vector<double>{1.0, std::nan("")}), std::domain_error);
}

TEST(ExactVectorAccess, ThreeFour) {
  Vec v(2);
  v << 3.0, 4.0;
  const auto a = build_exact_vector_access(v);
  EXPECT_DOUBLE_EQ(a->norm(), 5.0);
  const auto p = a->sampler_distribution();
  EXPECT_NEAR(p[0], 9.0 / 25.0, 1e-15);
  EXPECT_NEAR(p[1], 16.0 / 25.0, 1e-15);
}

TEST(ExactVectorAccess, PointMass) {
  Vec v = Vec::Zero(3);
  v(0) = 1.0;
  const auto a = build_exact_vector_access(v);
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(a->sample(rng), 0);
  EXPECT_DOUBLE_EQ(a->norm(), 1.0);
}

TEST(ExactVectorAccess, ZeroVectorRejected) {
  EXPECT_THROW(build_exact_vector_access(Vec::Zero(4)), std::domain_error);
}

TEST(ExactVectorAccess, EmpiricalFrequenciesMatch) {
  Rng rng(7);
  const Vec v = gaussian_vector(1000, rng);
  const auto a = build_exact_vector_access(v);
  const auto p = a->ideal_distribution();
  const Index draws = 1000000;
  const auto freq = empirical(*a, draws, rng);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sd = std::sqrt(p[i] * (1.0 - p[i]) / static_cast<double>(draws));
    EXPECT_LE(std::abs(freq[i] - p[i]), 5.0 * sd + 1e-12) << i;
  }
  EXPECT_LE(tv_distance(freq, p), 0.02);
}

TEST(TvDistance, Examples) {
  EXPECT_DOUBLE_EQ(tv_distance({0.5, 0.5}, {0.5, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(tv_distance({1.0, 0.0}, {0.0, 1.0}), 1.0);
  EXPECT_NEAR(tv_distance({0.7, 0.3}, {0.5, 0.5}), 0.2, 1e-15);
  EXPECT_THROW(tv_distance({0.7, 0.4}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(tv_distance({1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST(TvDistance, MetricOnRandomTriples) {
  Rng rng(9);
  auto random_dist = [&rng] {
    Distribution p(6);
    double s = 0.0;
    for (auto& x : p) s += (x = rng.uniform());
    for (auto& x : p) x /= s;
    return p;
  };
  for (int k = 0; k < 100; ++k) {
    const auto p = random_dist(), q = random_dist(), r = random_dist();
    EXPECT_DOUBLE_EQ(tv_distance(p, q), tv_distance(q, p));
    EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
    EXPECT_LE(tv_distance(p, r), tv_distance(p, q) + tv_distance(q, r) + 1e-15);
  }
}

TEST(MatrixAccess, Identity) {
  const auto a = build_matrix_access(Mat::Identity(2, 2));
  EXPECT_NEAR(a->frobenius(), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(a->row_norm(0), 1.0);
  const auto p = a->row_norms().sampler_distribution();
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(MatrixAccess, ZeroRowIsAbsentAndNeverSampled) {
  Mat m = Mat::Zero(3, 2);
  m(0, 0) = 1.0;
  m(2, 1) = 2.0;
  const auto a = build_matrix_access(m);
  EXPECT_EQ(a->row(1), nullptr);
  EXPECT_EQ(a->query(1, 0), Complex(0.0));
  Rng rng(2);
  for (int k = 0; k < 2000; ++k) EXPECT_NE(a->row_norms().sample(rng), 1);
}

TEST(MatrixAccess, RandomMatrixDistributions) {
  Rng rng(11);
  const Mat m = gaussian_matrix(50, 40, rng);
  const auto a = build_matrix_access(m);
  EXPECT_NEAR(a->frobenius(), m.norm(), 1e-10 * m.norm());
  EXPECT_LT((a->materialize() - m).norm(), 1e-14);
  const Index draws = 200000;
  const auto freq = empirical(a->row_norms(), draws, rng);
  const auto p = a->row_norms().ideal_distribution();
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_LE(std::abs(freq[i] - p[i]), 5.0 * std::sqrt(p[i] / static_cast<double>(draws)));
  const auto row_freq = empirical(*a->row(3), draws, rng);
  const auto row_p = a->row(3)->ideal_distribution();
  for (std::size_t j = 0; j < row_p.size(); ++j)
    EXPECT_LE(std::abs(row_freq[j] - row_p[j]), 5.0 * std::sqrt(row_p[j] / static_cast<double>(draws)) + 1e-12);
}

TEST(Oversampled, IdentityBoundGivesPhiOne) {
  Rng rng(3);
  const Vec u = gaussian_vector(20, rng);
  const auto o = exact_oversampled(build_exact_vector_access(u));
  EXPECT_DOUBLE_EQ(o.phi(), 1.0);
  EXPECT_NEAR(o.norm(), u.norm(), 1e-12);
}

TEST(Oversampled, DoubledBoundGivesPhiFour) {
  Rng rng(3);
  const Vec u = gaussian_vector(20, rng);
  const auto o = wrap_oversampled([&u](Index i) { return u(i); }, build_exact_vector_access(2.0 * u));
  EXPECT_NEAR(o.phi(), 4.0, 1e-12);
  EXPECT_NO_THROW(wrap_oversampled([&u](Index i) { return u(i); }, build_exact_vector_access(2.0 * u), 4.0));
  EXPECT_THROW(wrap_oversampled([&u](Index i) { return u(i); }, build_exact_vector_access(2.0 * u), 3.0),
               std::domain_error);
}

TEST(Oversampled, LowRankMaskBound) {
  Rng rng(4);
  const Vec u = gaussian_vector(30, rng);
  const Vec mask = gaussian_vector(30, rng);
  Vec bound(30);
  for (Index i = 0; i < 30; ++i) bound(i) = std::abs(u(i)) + std::abs(mask(i));
  const auto o = wrap_oversampled([&u](Index i) { return u(i); }, build_exact_vector_access(bound));
  EXPECT_NEAR(o.phi(), bound.squaredNorm() / u.squaredNorm(), 1e-12);
  EXPECT_GT(o.phi(), 1.0);
}

TEST(Oversampled, DominationViolationRejected) {
  Vec u(2), bound(2);
  u << 1.0, 2.0;
  bound << 3.0, 1.0;
  EXPECT_THROW(wrap_oversampled([&u](Index i) { return u(i); }, build_exact_vector_access(bound)), std::domain_error);
}

TEST(Oversampled, MatrixRowPhiIsExact) {
  Rng rng(6);
  const Mat m = gaussian_matrix(6, 5, rng);
  const auto o = exact_oversampled(build_matrix_access(m));
  EXPECT_DOUBLE_EQ(o.phi(), 1.0);
  EXPECT_NEAR(o.row(2).phi(), 1.0, 1e-12);
  EXPECT_NEAR(o.frobenius(), m.norm(), 1e-12);
}

TEST(VectorAccessHelpers, ConjugateAndScaled) {
  Vec v(2);
  v << Complex(1, 2), Complex(0, -1);
  const auto base = build_exact_vector_access(v);
  const auto c = conjugate_access(base);
  EXPECT_EQ(c->query(0), Complex(1, -2));
  EXPECT_EQ(c->sampler_distribution(), base->sampler_distribution());
  const auto s = scaled_access(base, 3.0);
  EXPECT_NEAR(s->norm(), 3.0 * base->norm(), 1e-14);
  EXPECT_EQ(s->query(1), Complex(0, -3));
}
