#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dequant/rng.hh"
#include "dequant/sampler.hh"
#include "dequant/types.hh"

namespace dequant {

// ---------------------------------------------------------------------------
// Vector access

/// Query access, an index sampler and a reported norm for a vector u.
///
/// The sampler draws from some distribution p~ with TV(p~, p_u) <= epsilon(),
/// where p_u(i) = |u(i)|^2 / ||u||^2. Implementations are immutable.
class VectorAccess {
 public:
  virtual ~VectorAccess() = default;

  virtual Index size() const = 0;
  virtual Complex query(Index i) const = 0;
  virtual Index sample(Rng& rng) const = 0;
  virtual double norm() const = 0;
  virtual double epsilon() const = 0;

  /// Exact output distribution of sample(); O(size) or worse.
  virtual Distribution sampler_distribution() const = 0;

  /// p_u computed from queries; O(size).
  Distribution ideal_distribution() const;
  Vec materialize() const;
};

using VectorAccessPtr = std::shared_ptr<const VectorAccess>;

/// Exact sampler over a stored vector.
class ExactVectorAccess final : public VectorAccess {
 public:
  explicit ExactVectorAccess(Vec entries);

  Index size() const override { return entries_.size(); }
  Complex query(Index i) const override { return entries_(i); }
  Index sample(Rng& rng) const override { return tree_.sample(rng); }
  double norm() const override { return norm_; }
  double epsilon() const override { return 0.0; }
  Distribution sampler_distribution() const override { return tree_.distribution(); }

  const Vec& entries() const { return entries_; }

 private:
  Vec entries_;
  WeightTree tree_;
  double norm_;
};

/// Queries and norm of a base access, with samples drawn from an explicit p~.
class PerturbedVectorAccess final : public VectorAccess {
 public:
  PerturbedVectorAccess(VectorAccessPtr base, const Distribution& p_tilde, double achieved_tv);

  Index size() const override { return base_->size(); }
  Complex query(Index i) const override { return base_->query(i); }
  Index sample(Rng& rng) const override { return tree_.sample(rng); }
  double norm() const override { return base_->norm(); }
  double epsilon() const override { return tv_; }
  Distribution sampler_distribution() const override { return tree_.distribution(); }

 private:
  VectorAccessPtr base_;
  WeightTree tree_;
  double tv_;
};

/// Access assembled from callbacks; used for composite and derived samplers.
struct AccessCallbacks {
  Index size = 0;
  QueryFn query;
  std::function<Index(Rng&)> sample;
  double norm = 0.0;
  double epsilon = 0.0;
  std::function<Distribution()> distribution;
};

class CallbackVectorAccess final : public VectorAccess {
 public:
  explicit CallbackVectorAccess(AccessCallbacks cb) : cb_(std::move(cb)) {}

  Index size() const override { return cb_.size; }
  Complex query(Index i) const override { return cb_.query(i); }
  Index sample(Rng& rng) const override { return cb_.sample(rng); }
  double norm() const override { return cb_.norm; }
  double epsilon() const override { return cb_.epsilon; }
  Distribution sampler_distribution() const override { return cb_.distribution(); }

 private:
  AccessCallbacks cb_;
};

/// Throws std::domain_error for an all-zero vector.
VectorAccessPtr build_exact_vector_access(const Vec& v);

/// Same sampler and norm; entries conjugated.
VectorAccessPtr conjugate_access(VectorAccessPtr a);

/// Entries and norm multiplied by scale > 0; same sampler.
VectorAccessPtr scaled_access(VectorAccessPtr a, double scale);

/// Half L1 distance. Both inputs must sum to 1 within 1e-9.
double tv_distance(const Distribution& p, const Distribution& q);

// ---------------------------------------------------------------------------
// Oversampled vector access

/// Query access to u together with an access to a dominating vector ubar,
/// |ubar(i)| >= |u(i)| and ||ubar||^2 = phi ||u||^2.
class OversampledVectorAccess {
 public:
  OversampledVectorAccess(QueryFn query, VectorAccessPtr bound, double phi);

  Index size() const { return bound_->size(); }
  Complex query(Index i) const { return query_(i); }
  const VectorAccess& bound() const { return *bound_; }
  const VectorAccessPtr& bound_ptr() const { return bound_; }
  const QueryFn& query_fn() const { return query_; }
  double phi() const { return phi_; }
  double epsilon() const { return bound_->epsilon(); }
  double norm() const;

 private:
  QueryFn query_;
  VectorAccessPtr bound_;
  double phi_;
};

/// Checks domination entrywise and ||ubar||^2 = phi ||u||^2 (relative 1e-9)
/// on materialized vectors; throws std::domain_error on violation.
OversampledVectorAccess wrap_oversampled(QueryFn u_query, VectorAccessPtr bound, double phi);

/// As above with phi computed as ||ubar||^2 / ||u||^2 by summation.
OversampledVectorAccess wrap_oversampled(QueryFn u_query, VectorAccessPtr bound);

/// phi = 1, ubar = u.
OversampledVectorAccess exact_oversampled(VectorAccessPtr u);

// ---------------------------------------------------------------------------
// Matrix access

/// Access to every row of an m x n matrix and to its row-norm vector.
/// row(i) is null exactly when row i is zero.
class MatrixAccess {
 public:
  virtual ~MatrixAccess() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual VectorAccessPtr row(Index i) const = 0;
  virtual const VectorAccess& row_norms() const = 0;
  /// Declared TV bound shared by every row sampler and the row-norm sampler.
  virtual double epsilon() const = 0;

  Complex query(Index i, Index j) const;
  double row_norm(Index i) const { return row_norms().query(i).real(); }
  double frobenius() const { return row_norms().norm(); }
  Mat materialize() const;
};

using MatrixAccessPtr = std::shared_ptr<const MatrixAccess>;

class StoredMatrixAccess final : public MatrixAccess {
 public:
  StoredMatrixAccess(Index rows, Index cols, std::vector<VectorAccessPtr> row_access,
                     VectorAccessPtr row_norm_access);

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  VectorAccessPtr row(Index i) const override { return row_access_[static_cast<std::size_t>(i)]; }
  const VectorAccess& row_norms() const override { return *row_norm_access_; }
  double epsilon() const override { return epsilon_; }

  const VectorAccessPtr& row_norm_ptr() const { return row_norm_access_; }

 private:
  Index rows_;
  Index cols_;
  std::vector<VectorAccessPtr> row_access_;
  VectorAccessPtr row_norm_access_;
  double epsilon_;
};

/// Exact accesses to every nonzero row and to row(A). Rejects an all-zero A.
std::shared_ptr<const StoredMatrixAccess> build_matrix_access(const Mat& a);

using EntryFn = std::function<Complex(Index, Index)>;

/// Query access to A plus a matrix access to a dominating Abar with
/// |Abar(i,j)| >= |A(i,j)| and ||Abar||_F^2 = phi ||A||_F^2.
class OversampledMatrixAccess {
 public:
  OversampledMatrixAccess(EntryFn query, MatrixAccessPtr bound, double phi);

  Index rows() const { return bound_->rows(); }
  Index cols() const { return bound_->cols(); }
  Complex query(Index i, Index j) const { return query_(i, j); }
  const MatrixAccess& bound() const { return *bound_; }
  const MatrixAccessPtr& bound_ptr() const { return bound_; }
  double phi() const { return phi_; }
  double epsilon() const { return bound_->epsilon(); }
  double frobenius() const;

  /// Row i of A with the bound's row i; phi_i computed exactly in O(n).
  /// Requires row i of A to be nonzero.
  OversampledVectorAccess row(Index i) const;

  Mat materialize() const;

 private:
  EntryFn query_;
  MatrixAccessPtr bound_;
  double phi_;
};

/// phi = 1 with the access itself as bound.
OversampledMatrixAccess exact_oversampled(MatrixAccessPtr a);

}  // namespace dequant
