#include "dequant/applications.hh"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "dequant/oracle.hh"

namespace dequant {

namespace {

// Oversampled access to row l of R, conjugated when `conjugate` is set.
// Empty when the row is zero.
std::optional<OversampledVectorAccess> sketch_row_term(const SvtSketchHandle& h, Index l, bool conjugate) {
  if (h.sketched_rows.row(l).squaredNorm() == 0.0 || !h.rows_access->bound().row(l)) return std::nullopt;
  auto row = h.rows_access->row(l);
  if (!conjugate) return row;
  auto q = row.query_fn();
  return OversampledVectorAccess([q](Index j) { return std::conj(q(j)); }, row.bound_ptr(), row.phi());
}

// Sum of lambda_l R(l,.) (or conj rows) plus optional extra terms.
OversampledVectorAccess combine_rows(const SvtSketchHandle& h, const Vec& lambda, bool conjugate,
                                     std::vector<OversampledVectorAccess> extra_terms = {},
                                     std::vector<Complex> extra_lambda = {}) {
  std::vector<OversampledVectorAccess> terms;
  std::vector<Complex> coeffs;
  for (Index l = 0; l < lambda.size(); ++l) {
    if (lambda(l) == Complex(0.0)) continue;
    auto term = sketch_row_term(h, l, conjugate);
    if (!term) continue;
    terms.push_back(std::move(*term));
    coeffs.push_back(lambda(l));
  }
  for (std::size_t k = 0; k < extra_terms.size(); ++k) {
    terms.push_back(extra_terms[k]);
    coeffs.push_back(extra_lambda[k]);
  }
  if (terms.empty()) throw std::domain_error("degenerate output: all coefficients vanish");
  return linear_combination_access(terms, coeffs);
}

std::shared_ptr<const RandomizedVectorAccess> randomize(const OversampledVectorAccess& v, double delta, double eta,
                                                        bool enforce, bool& violation) {
  try {
    return std::make_shared<const RandomizedVectorAccess>(to_randomized_access(v, v.phi(), delta, eta));
  } catch (const std::domain_error&) {
    if (enforce) throw;
    violation = true;
    return nullptr;
  }
}

Vec dense_of(const OversampledVectorAccess& v) {
  Vec out(v.size());
  for (Index j = 0; j < v.size(); ++j) out(j) = v.query(j);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Vec QsvtResult::materialize() const { return dense_of(*combination); }

double qsvt_epsilon_bound(double phi, int degree, double eta, double delta, double norm_lower_bound) {
  const double d8 = std::pow(std::max(degree, 1), 8);
  const double log_term = std::max(std::log(1.0 / delta), 1.0);
  return eta * eta * std::pow(norm_lower_bound, 4) / (phi * phi * phi * d8 * log_term);
}

QsvtResult qsvt_lowrank(const OversampledMatrixAccess& a, const OversampledVectorAccess& b, const EvenPolynomial& p,
                        const QsvtParams& params, Rng& rng) {
  if (!(params.norm_lower_bound > 0.0)) throw std::domain_error("qsvt_lowrank: norm lower bound must be positive");
  if (a.cols() != b.size()) throw std::invalid_argument("qsvt_lowrank: dimension mismatch");
  QsvtResult res;
  res.constant_term = p.constant_term();
  const double phi = std::max(a.phi(), b.phi());
  const double eps = std::max(a.epsilon(), b.epsilon());
  res.epsilon_bound = qsvt_epsilon_bound(phi, p.degree(), params.eta, params.delta, params.norm_lower_bound);
  if (eps > res.epsilon_bound) {
    if (params.enforce_epsilon) throw std::domain_error("qsvt_lowrank: epsilon exceeds the admissible bound");
    res.epsilon_violation = true;
  }

  if (p.degree() == 0) {
    if (res.constant_term == Complex(0.0)) throw std::domain_error("qsvt_lowrank: zero polynomial");
    res.combination = std::make_shared<const OversampledVectorAccess>(linear_combination_access({b}, {res.constant_term}));
  } else {
    const SmoothFunction f = p.clipped();
    SvtParams sp;
    sp.gamma = 0.5 * params.eta * params.norm_lower_bound;
    sp.delta = params.delta / 3.0;
    sp.r = params.r;
    sp.c = params.c;
    sp.enforce_epsilon = params.enforce_epsilon;
    res.svt = svt_sketch(a, f, sp, rng);
    const SvtSketchHandle& h = *res.svt;
    res.r = h.r();
    res.c = h.c();

    res.r_joint = params.r_joint;
    if (res.r_joint <= 0) {
      const double scale = params.eta * params.norm_lower_bound / (16.0 * std::max(f.fbar_max, 1e-300));
      res.r_joint = static_cast<Index>(
          std::ceil(7.0 * std::log(6.0 / params.delta) * h.columns_access->phi() * b.phi() / (scale * scale)));
    }
    Rng joint_stream = rng.split(0x51);
    res.joint_sketch = joint_sketch(*h.columns_access, column_matrix_access(b), res.r_joint, joint_stream);

    // u = R Sigma^dag Sigma b
    res.sketched_b = Vec::Zero(h.r());
    for (Index k = 0; k < res.joint_sketch.size(); ++k) {
      const Index t = res.joint_sketch.indices[static_cast<std::size_t>(k)];
      const double beta = res.joint_sketch.scales[static_cast<std::size_t>(k)];
      if (beta == 0.0) continue;
      res.sketched_b += (beta * beta * b.query(t)) * h.sketched_rows.col(t);
    }
    res.transformed = h.apply_fbar(res.sketched_b);

    std::vector<OversampledVectorAccess> extra;
    std::vector<Complex> extra_lambda;
    if (res.constant_term != Complex(0.0)) {
      extra.push_back(b);
      extra_lambda.push_back(res.constant_term);
    }
    res.combination =
        std::make_shared<const OversampledVectorAccess>(combine_rows(h, res.transformed, true, extra, extra_lambda));
  }
  res.access = randomize(*res.combination, params.output_delta, params.output_eta, params.enforce_epsilon,
                         res.epsilon_violation);
  return res;
}

// ---------------------------------------------------------------------------

SparseQsvtResult sparse_qsvt(const SparseMatrix& a, const QueryFn& u, const VectorAccess& v, const EvenPolynomial& p,
                             const SparseQsvtParams& params, Rng& rng) {
  if (a.cols() != v.size()) throw std::invalid_argument("sparse_qsvt: dimension mismatch");
  SparseQsvtResult res;
  res.epsilon_bound = params.eta * params.eta / 9.0;
  res.stated_epsilon_bound = params.eta / 9.0;
  if (v.epsilon() > res.epsilon_bound) {
    if (params.enforce_epsilon) throw std::domain_error("sparse_qsvt: epsilon exceeds eta^2 / 9");
    res.epsilon_violation = true;
  }
  EstimationParams ep;
  ep.xi = params.xi > 0.0 ? params.xi : params.eta / 100.0;
  const double n = static_cast<double>(v.size());
  ep.delta = params.delta > 0.0 ? params.delta : std::min(1.0, 1.0 / (n * n));
  ep.batch_size = params.batch_size;
  ep.batches = params.batches;

  const Index sparsity = a.sparsity();
  std::unordered_map<Index, Complex> memo;
  QueryFn transformed = [&](Index j) {
    auto it = memo.find(j);
    if (it != memo.end()) return it->second;
    const Complex value = sparse_poly_query(a, u, p, j, sparsity);
    memo.emplace(j, value);
    return value;
  };
  // (v, Pu) = sum v conj(Pu), so v^dag Pu is its conjugate. ||Pu|| <= ||u|| <= 1.
  res.estimate = std::conj(inner_product_sq(v, transformed, 1.0, ep, rng));
  res.distinct_queries = static_cast<Index>(memo.size());
  res.error_bound = inner_product_sq_bound(v.epsilon(), ep.xi, v.norm(), 1.0);
  return res;
}

// ---------------------------------------------------------------------------

ClusteringLift make_clustering_lift(std::shared_ptr<const MatrixAccess> m, const Vec& w) {
  const Index n = m->rows();
  const Index d = m->cols();
  if (w.size() != n) throw std::invalid_argument("clustering: weight length must equal the row count");
  if (!(m->frobenius() > 0.0)) throw std::domain_error("clustering: zero matrix");
  auto weights = std::make_shared<const Vec>(w);

  ClusteringLift lift;
  const double frob_sq = m->frobenius() * m->frobenius();
  AccessCallbacks cb;
  cb.size = n * d * n;
  cb.query = [m, n, d](Index idx) {
    const Index k = idx % n;
    const Index ij = idx / n;
    return m->query(ij / d, ij % d) * m->row_norm(k);
  };
  cb.sample = [m, n, d](Rng& rng) {
    const Index i = m->row_norms().sample(rng);
    const auto row = m->row(i);
    const Index j = row ? row->sample(rng) : 0;
    const Index k = m->row_norms().sample(rng);
    return (i * d + j) * n + k;
  };
  cb.norm = frob_sq;
  cb.epsilon = 3.0 * m->epsilon();
  cb.distribution = [m, n, d] {
    const auto rows = m->row_norms().sampler_distribution();
    Distribution p(static_cast<std::size_t>(n * d * n), 0.0);
    for (Index i = 0; i < n; ++i) {
      const double pi = rows[static_cast<std::size_t>(i)];
      if (pi == 0.0) continue;
      const auto row = m->row(i);
      Distribution pj(static_cast<std::size_t>(d), 0.0);
      if (row) pj = row->sampler_distribution();
      else pj[0] = 1.0;
      for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < n; ++k)
          p[static_cast<std::size_t>((i * d + j) * n + k)] =
              pi * pj[static_cast<std::size_t>(j)] * rows[static_cast<std::size_t>(k)];
    }
    return p;
  };
  lift.u = std::make_shared<CallbackVectorAccess>(std::move(cb));
  lift.u_norm = frob_sq;
  lift.v = [m, weights, n, d](Index idx) -> Complex {
    const Index k = idx % n;
    const Index ij = idx / n;
    const double row_norm = m->row_norm(k);
    if (row_norm == 0.0) return 0.0;
    return std::conj((*weights)(ij / d)) * (*weights)(k) * m->query(k, ij % d) / row_norm;
  };
  double supported = 0.0;
  for (Index k = 0; k < n; ++k)
    if (m->row_norm(k) > 0.0) supported += std::norm(w(k));
  lift.v_norm = w.norm() * std::sqrt(supported);
  return lift;
}

ClusteringResult supervised_clustering(std::shared_ptr<const MatrixAccess> m, const Vec& w,
                                       const ClusteringParams& params, Rng& rng) {
  ClusteringResult res;
  res.epsilon_bound = params.eta * params.eta / 25.0;
  if (m->epsilon() > res.epsilon_bound) {
    if (params.enforce_epsilon) throw std::domain_error("supervised_clustering: epsilon exceeds eta^2 / 25");
    res.epsilon_violation = true;
  }
  const auto lift = make_clustering_lift(m, w);
  res.u_norm = lift.u_norm;
  res.v_norm = lift.v_norm;
  res.sampler_epsilon = lift.u->epsilon();
  EstimationParams ep;
  ep.xi = params.xi > 0.0 ? params.xi : params.eta / 100.0;
  ep.delta = params.delta;
  ep.batch_size = params.batch_size;
  ep.batches = params.batches;
  res.error_bound = inner_product_sq_bound(res.sampler_epsilon, ep.xi, res.u_norm, res.v_norm);
  if (res.v_norm == 0.0) return res;  // w vanishes on every nonzero row: ||wM|| = 0
  res.estimate = inner_product_sq(*lift.u, lift.v, res.v_norm, ep, rng).real();
  return res;
}

// ---------------------------------------------------------------------------

RecommendationResult recommendation_sample(const OversampledMatrixAccess& a, Index row,
                                           const RecommendationParams& params, Rng& rng) {
  if (row < 0 || row >= a.rows()) throw std::out_of_range("recommendation_sample: row out of range");
  RecommendationResult res;
  res.row = row;
  const double frob = a.frobenius();
  const double condition = frob * frob / (params.sigma * params.sigma);
  const double phi = a.phi();
  const double eps = a.epsilon();
  const double prior_bound = params.nu * params.xi / (48.0 * condition * condition * phi);
  if (eps > prior_bound && params.enforce_epsilon)
    throw std::domain_error("recommendation_sample: epsilon exceeds the admissible bound");

  const ThresholdTransfer transfer(TransferKind::Recommendation, params.sigma, params.xi);
  SvtParams sp;
  sp.gamma = 0.5 * params.nu;
  sp.delta = params.delta / 5.0;
  sp.r = params.r;
  sp.c = params.c;
  sp.enforce_epsilon = params.enforce_epsilon;
  res.svt = svt_sketch(a, transfer.as_smooth_function(), sp, rng);
  const SvtSketchHandle& h = res.svt;
  res.r = h.r();
  res.c = h.c();

  res.r_joint = params.r_joint;
  if (res.r_joint <= 0)
    res.r_joint = static_cast<Index>(std::ceil(7.0 * std::log(5.0 * static_cast<double>(a.rows()) / params.delta) *
                                               phi * h.columns_access->phi() * condition /
                                               (params.nu * params.nu)));
  const auto row_access = a.row(row);
  Rng joint_stream = rng.split(0x52);
  res.joint_sketch = joint_sketch(column_matrix_access(row_access), *h.columns_access, res.r_joint, joint_stream);

  // y = A(i,.) Sigma^dag Sigma R^dag as a column: y(l) = sum_k beta_k^2 A(i,t_k) conj(R(l,t_k)).
  Vec y = Vec::Zero(h.r());
  for (Index k = 0; k < res.joint_sketch.size(); ++k) {
    const Index t = res.joint_sketch.indices[static_cast<std::size_t>(k)];
    const double beta = res.joint_sketch.scales[static_cast<std::size_t>(k)];
    if (beta == 0.0) continue;
    y += (beta * beta * row_access.query(t)) * h.sketched_rows.col(t).conjugate();
  }
  // x = y^T tbar(CC^dag) as a column: conj(tbar conj(y)) since tbar is Hermitian.
  res.coefficients = h.apply_fbar(y.conjugate()).conjugate();
  if (res.coefficients.norm() == 0.0) throw std::domain_error("recommendation_sample: degenerate row");
  res.combination = std::make_shared<const OversampledVectorAccess>(combine_rows(h, res.coefficients, false));
  res.approx_row = dense_of(*res.combination);

  const double approx_sq = res.approx_row.squaredNorm();
  if (!(approx_sq > 0.0)) throw std::domain_error("recommendation_sample: degenerate row");
  const double row_sq = row_access.norm() * row_access.norm();
  const double posterior_bound = params.delta * approx_sq / (45.0 * condition * phi * phi * row_sq);
  res.epsilon_bound = std::min(prior_bound, posterior_bound);
  // The second term depends on the sketch, so it is reported rather than enforced.
  res.epsilon_violation = eps > res.epsilon_bound;

  res.access = randomize(*res.combination, params.delta / 5.0, 1.0, params.enforce_epsilon, res.epsilon_violation);
  if (res.access) {
    Rng sample_stream = rng.split(0x53);
    res.sample = res.access->sample(sample_stream);
  }
  return res;
}

// ---------------------------------------------------------------------------

InversionResult matrix_inversion(const OversampledMatrixAccess& a, const Vec& b, const InversionParams& params,
                                 Rng& rng) {
  if (b.size() != a.rows()) throw std::invalid_argument("matrix_inversion: dimension mismatch");
  const double b_norm = b.norm();
  if (!(b_norm > 0.0)) throw std::domain_error("matrix_inversion: zero right-hand side");
  InversionResult res;
  const double frob = a.frobenius();
  const double condition = frob * frob / (params.sigma * params.sigma);
  res.condition = condition;
  const double phi = a.phi();
  const double k3 = condition * condition * condition;
  res.epsilon_bound = std::min(params.eta * params.eta / k3, 1.0 / (phi * phi * k3));
  if (a.epsilon() > res.epsilon_bound) {
    if (params.enforce_epsilon) throw std::domain_error("matrix_inversion: epsilon exceeds the admissible bound");
    res.epsilon_violation = true;
  }
  if (params.validate_b && residual_outside_retained(a.materialize(), b, params.sigma) > 1e-8 * b_norm)
    throw std::domain_error("matrix_inversion: b has a component below sigma");

  const ThresholdTransfer transfer(TransferKind::Inversion, params.sigma, params.xi);
  SvtParams sp;
  sp.gamma = params.eta / (2.0 * frob * frob);
  sp.delta = params.delta / 3.0;
  sp.r = params.r;
  sp.c = params.c;
  sp.enforce_epsilon = params.enforce_epsilon;
  res.svt = svt_sketch(a, transfer.as_smooth_function(), sp, rng);
  const SvtSketchHandle& h = res.svt;

  EstimationParams ep;
  ep.xi = params.bilinear_xi > 0.0 ? params.bilinear_xi : params.eta / (16.0 * std::pow(condition, 1.5));
  ep.delta = std::min(1.0, params.delta / (3.0 * static_cast<double>(h.r())));
  ep.batch_size = params.bilinear_batch_size;
  ep.batches = params.bilinear_batches;

  // u(i) = R(i,.) A^dag b = conj(b^dag A conj(R(i,.))).
  const QueryFn b_query = [&b](Index k) { return b(k); };
  res.estimates = Vec::Zero(h.r());
  for (Index i = 0; i < h.r(); ++i) {
    const double row_norm = h.sketched_rows.row(i).norm();
    if (row_norm == 0.0) continue;
    const QueryFn row_query = [&h, i](Index j) { return std::conj(h.sketched_rows(i, j)); };
    Rng stream = rng.split(0x1000 + static_cast<std::uint64_t>(i));
    res.estimates(i) = std::conj(bilinear_form(a, b_query, b_norm, row_query, row_norm, ep, stream));
  }
  res.transformed = h.apply_fbar(res.estimates);
  res.combination = std::make_shared<const OversampledVectorAccess>(combine_rows(h, res.transformed, true));
  res.solution = dense_of(*res.combination);
  if (!(res.solution.squaredNorm() > 0.0)) throw std::domain_error("matrix_inversion: degenerate solution");
  res.access = randomize(*res.combination, params.output_delta, params.output_eta, params.enforce_epsilon,
                         res.epsilon_violation);
  return res;
}

}  // namespace dequant
