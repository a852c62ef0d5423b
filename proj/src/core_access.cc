#include "dequant/core_access.hh"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dequant {

namespace {

std::vector<double> squared_magnitudes(const Vec& v) {
  std::vector<double> w(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) w[static_cast<std::size_t>(i)] = std::norm(v(i));
  return w;
}

}  // namespace

Distribution VectorAccess::ideal_distribution() const {
  const Index n = size();
  Distribution p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += p[static_cast<std::size_t>(i)] = std::norm(query(i));
  if (total > 0)
    for (auto& x : p) x /= total;
  return p;
}

Vec VectorAccess::materialize() const {
  Vec v(size());
  for (Index i = 0; i < size(); ++i) v(i) = query(i);
  return v;
}

ExactVectorAccess::ExactVectorAccess(Vec entries) : entries_(std::move(entries)) {
  const auto w = squared_magnitudes(entries_);
  tree_ = WeightTree(w);
  if (!(tree_.total() > 0.0)) throw std::domain_error("exact vector access: all-zero vector");
  norm_ = entries_.norm();
  const double reference = std::sqrt(tree_.total());
  if (std::abs(norm_ - reference) > 8 * std::numeric_limits<double>::epsilon() * reference * std::log2(2.0 + entries_.size()))
    throw std::logic_error("exact vector access: cached norm disagrees with weight total");
}

PerturbedVectorAccess::PerturbedVectorAccess(VectorAccessPtr base, const Distribution& p_tilde, double achieved_tv)
    : base_(std::move(base)), tree_(p_tilde), tv_(achieved_tv) {
  if (static_cast<Index>(p_tilde.size()) != base_->size())
    throw std::invalid_argument("perturbed access: distribution length mismatch");
}

VectorAccessPtr build_exact_vector_access(const Vec& v) { return std::make_shared<ExactVectorAccess>(v); }

VectorAccessPtr conjugate_access(VectorAccessPtr a) {
  AccessCallbacks cb;
  cb.size = a->size();
  cb.query = [a](Index i) { return std::conj(a->query(i)); };
  cb.sample = [a](Rng& rng) { return a->sample(rng); };
  cb.norm = a->norm();
  cb.epsilon = a->epsilon();
  cb.distribution = [a] { return a->sampler_distribution(); };
  return std::make_shared<CallbackVectorAccess>(std::move(cb));
}

VectorAccessPtr scaled_access(VectorAccessPtr a, double scale) {
  if (!(scale > 0.0)) throw std::domain_error("scaled access: scale must be positive");
  AccessCallbacks cb;
  cb.size = a->size();
  cb.query = [a, scale](Index i) { return scale * a->query(i); };
  cb.sample = [a](Rng& rng) { return a->sample(rng); };
  cb.norm = scale * a->norm();
  cb.epsilon = a->epsilon();
  cb.distribution = [a] { return a->sampler_distribution(); };
  return std::make_shared<CallbackVectorAccess>(std::move(cb));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
  double sp = 0.0, sq = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    l1 += std::abs(p[i] - q[i]);
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("tv_distance: inputs must sum to 1");
  return 0.5 * l1;
}

// ---------------------------------------------------------------------------

OversampledVectorAccess::OversampledVectorAccess(QueryFn query, VectorAccessPtr bound, double phi)
    : query_(std::move(query)), bound_(std::move(bound)), phi_(phi) {
  if (!(phi_ >= 1.0 - 1e-12)) throw std::domain_error("oversampled access: phi must be >= 1");
}

double OversampledVectorAccess::norm() const { return bound_->norm() / std::sqrt(phi_); }

OversampledVectorAccess wrap_oversampled(QueryFn u_query, VectorAccessPtr bound, double phi) {
  double u_sq = 0.0;
  for (Index i = 0; i < bound->size(); ++i) {
    const double ui = std::abs(u_query(i));
    const double bi = std::abs(bound->query(i));
    if (ui > bi * (1.0 + 1e-12) + 1e-300) throw std::domain_error("wrap_oversampled: bound does not dominate u");
    u_sq += ui * ui;
  }
  const double b_sq = bound->norm() * bound->norm();
  if (std::abs(b_sq - phi * u_sq) > 1e-9 * b_sq)
    throw std::domain_error("wrap_oversampled: ||ubar||^2 != phi ||u||^2");
  return OversampledVectorAccess(std::move(u_query), std::move(bound), phi);
}

OversampledVectorAccess wrap_oversampled(QueryFn u_query, VectorAccessPtr bound) {
  double u_sq = 0.0;
  for (Index i = 0; i < bound->size(); ++i) u_sq += std::norm(u_query(i));
  if (!(u_sq > 0.0)) throw std::domain_error("wrap_oversampled: u is zero");
  const double phi = bound->norm() * bound->norm() / u_sq;
  return wrap_oversampled(std::move(u_query), std::move(bound), phi);
}

OversampledVectorAccess exact_oversampled(VectorAccessPtr u) {
  QueryFn q = [u](Index i) { return u->query(i); };
  return OversampledVectorAccess(std::move(q), std::move(u), 1.0);
}

// ---------------------------------------------------------------------------

Complex MatrixAccess::query(Index i, Index j) const {
  const auto r = row(i);
  return r ? r->query(j) : Complex(0.0);
}

Mat MatrixAccess::materialize() const {
  Mat a = Mat::Zero(rows(), cols());
  for (Index i = 0; i < rows(); ++i)
    if (const auto r = row(i))
      for (Index j = 0; j < cols(); ++j) a(i, j) = r->query(j);
  return a;
}

StoredMatrixAccess::StoredMatrixAccess(Index rows, Index cols, std::vector<VectorAccessPtr> row_access,
                                       VectorAccessPtr row_norm_access)
    : rows_(rows), cols_(cols), row_access_(std::move(row_access)), row_norm_access_(std::move(row_norm_access)) {
  if (static_cast<Index>(row_access_.size()) != rows_ || row_norm_access_->size() != rows_)
    throw std::invalid_argument("matrix access: shape mismatch");
  epsilon_ = row_norm_access_->epsilon();
  for (const auto& r : row_access_)
    if (r) epsilon_ = std::max(epsilon_, r->epsilon());
}

std::shared_ptr<const StoredMatrixAccess> build_matrix_access(const Mat& a) {
  std::vector<VectorAccessPtr> rows(static_cast<std::size_t>(a.rows()));
  Vec norms(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const double n = a.row(i).norm();
    norms(i) = n;
    if (n > 0.0) rows[static_cast<std::size_t>(i)] = build_exact_vector_access(a.row(i).transpose());
  }
  if (!(norms.squaredNorm() > 0.0)) throw std::domain_error("build_matrix_access: all-zero matrix");
  return std::make_shared<StoredMatrixAccess>(a.rows(), a.cols(), std::move(rows), build_exact_vector_access(norms));
}

OversampledMatrixAccess::OversampledMatrixAccess(EntryFn query, MatrixAccessPtr bound, double phi)
    : query_(std::move(query)), bound_(std::move(bound)), phi_(phi) {
  if (!(phi_ >= 1.0 - 1e-12)) throw std::domain_error("oversampled matrix access: phi must be >= 1");
}

double OversampledMatrixAccess::frobenius() const { return bound_->frobenius() / std::sqrt(phi_); }

OversampledVectorAccess OversampledMatrixAccess::row(Index i) const {
  auto b = bound_->row(i);
  if (!b) throw std::domain_error("oversampled matrix access: zero bound row");
  double sq = 0.0;
  for (Index j = 0; j < cols(); ++j) sq += std::norm(query_(i, j));
  if (!(sq > 0.0)) throw std::domain_error("oversampled matrix access: zero row");
  const double phi_i = b->norm() * b->norm() / sq;
  auto q = query_;
  return OversampledVectorAccess([q, i](Index j) { return q(i, j); }, std::move(b), phi_i);
}

Mat OversampledMatrixAccess::materialize() const {
  Mat a(rows(), cols());
  for (Index i = 0; i < rows(); ++i)
    for (Index j = 0; j < cols(); ++j) a(i, j) = query_(i, j);
  return a;
}

OversampledMatrixAccess exact_oversampled(MatrixAccessPtr a) {
  auto* raw = a.get();
  return OversampledMatrixAccess([a, raw](Index i, Index j) { return raw->query(i, j); }, a, 1.0);
}

}  // namespace dequant
