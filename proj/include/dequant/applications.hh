#pragma once

#include <memory>
#include <optional>

#include "dequant/access_transforms.hh"
#include "dequant/estimators.hh"
#include "dequant/polynomial.hh"
#include "dequant/sketching.hh"
#include "dequant/sparse.hh"

namespace dequant {

// Sketch sizes set to 0 fall back to the size formulas. Every epsilon
// admissibility check uses the formula with its absolute constant set to 1;
// `enforce_epsilon = false` records a violation instead of throwing.

// ---------------------------------------------------------------------------
// Even polynomial transform of a low-rank matrix applied to a vector

struct QsvtParams {
  double eta = 0.1;
  double delta = 0.1;
  double norm_lower_bound = 0.0;  // lower bound on ||p(sqrt(A^dag A)) b||; must be positive
  Index r = 0;
  Index c = 0;
  Index r_joint = 0;
  bool enforce_epsilon = true;
  double output_delta = 0.1;  // failure budget of the returned sampler
  double output_eta = 0.1;    // relative accuracy of its norm estimate
};

struct QsvtResult {
  std::optional<SvtSketchHandle> svt;  // empty for a constant polynomial
  SketchDescription joint_sketch;      // Sigma over the columns of A
  Vec sketched_b;                      // u = R Sigma^dag Sigma b
  Vec transformed;                     // w = fbar(CC^dag) u
  Complex constant_term = 0.0;
  Index r = 0, c = 0, r_joint = 0;
  double epsilon_bound = 0.0;
  bool epsilon_violation = false;
  std::shared_ptr<const OversampledVectorAccess> combination;  // v = R^dag w + p(0) b
  std::shared_ptr<const RandomizedVectorAccess> access;

  Vec materialize() const;
};

/// Admissible input epsilon for the pipeline (with output epsilon' = 1).
double qsvt_epsilon_bound(double phi, int degree, double eta, double delta, double norm_lower_bound);

QsvtResult qsvt_lowrank(const OversampledMatrixAccess& a, const OversampledVectorAccess& b, const EvenPolynomial& p,
                        const QsvtParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Inner product with a polynomial of a sparse matrix

struct SparseQsvtParams {
  double eta = 0.2;
  double xi = 0.0;     // 0 selects eta / 100
  double delta = 0.0;  // 0 selects 1 / n^2
  Index batch_size = 0;
  Index batches = 0;
  bool enforce_epsilon = true;
};

struct SparseQsvtResult {
  Complex estimate = 0.0;
  double epsilon_bound = 0.0;        // eta^2 / 9, enforced
  double stated_epsilon_bound = 0.0;  // eta / 9, recorded only
  bool epsilon_violation = false;
  Index distinct_queries = 0;        // entries of p(sqrt(A^dag A)) u evaluated
  double error_bound = 0.0;          // (2 sqrt(2 eps) + xi) ||v||
};

/// Estimate of v^dag p(sqrt(A^dag A)) u given queries to A and u and sampling access to v.
SparseQsvtResult sparse_qsvt(const SparseMatrix& a, const QueryFn& u, const VectorAccess& v, const EvenPolynomial& p,
                             const SparseQsvtParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Supervised clustering: ||w M||^2

struct ClusteringParams {
  double eta = 0.1;
  double delta = 0.01;
  double xi = 0.0;  // 0 selects eta / 100
  Index batch_size = 0;
  Index batches = 0;
  bool enforce_epsilon = true;
};

/// Vectors over triples (i, j, k), flattened as (i d + j) n + k, whose inner
/// product is ||w M||^2.
struct ClusteringLift {
  VectorAccessPtr u;     // M(i,j) ||M(k,.)||, sampled by the composite sampler
  QueryFn v;             // conj(w_i) w_k M(k,j) / ||M(k,.)||
  double u_norm = 0.0;   // ||M||_F^2
  double v_norm = 0.0;   // ||w|| sqrt(sum over nonzero rows k of |w_k|^2)
};

ClusteringLift make_clustering_lift(std::shared_ptr<const MatrixAccess> m, const Vec& w);

struct ClusteringResult {
  double estimate = 0.0;
  double u_norm = 0.0;
  double v_norm = 0.0;
  double sampler_epsilon = 0.0;  // 3 eps
  double epsilon_bound = 0.0;    // eta^2 / 25
  bool epsilon_violation = false;
  double error_bound = 0.0;      // (2 sqrt(2 * 3 eps) + xi) ||u|| ||v||
};

ClusteringResult supervised_clustering(std::shared_ptr<const MatrixAccess> m, const Vec& w,
                                       const ClusteringParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Recommendation: sample from a row of a thresholded low-rank approximation

struct RecommendationParams {
  double sigma = 0.5;
  double xi = 0.2;
  double nu = 0.1;
  double delta = 0.1;
  Index r = 0;
  Index c = 0;
  Index r_joint = 0;
  bool enforce_epsilon = true;
};

struct RecommendationResult {
  SvtSketchHandle svt;
  Index row = 0;
  SketchDescription joint_sketch;  // Sigma_i over the columns of A
  Vec coefficients;                // x, so that Ahat(i,.) = x R
  Vec approx_row;                  // Ahat(i,.) materialized
  Index r = 0, c = 0, r_joint = 0;
  double epsilon_bound = 0.0;      // min of both admissibility terms
  bool epsilon_violation = false;
  std::shared_ptr<const OversampledVectorAccess> combination;
  std::shared_ptr<const RandomizedVectorAccess> access;
  std::optional<Index> sample;     // first draw from `access`
};

RecommendationResult recommendation_sample(const OversampledMatrixAccess& a, Index row,
                                           const RecommendationParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Thresholded pseudo-inverse applied to a vector

struct InversionParams {
  double sigma = 0.5;
  double xi = 0.2;
  double eta = 0.1;
  double delta = 0.1;
  Index r = 0;
  Index c = 0;
  double bilinear_xi = 0.0;  // 0 selects eta / (16 K^(3/2))
  Index bilinear_batch_size = 0;
  Index bilinear_batches = 0;
  bool enforce_epsilon = true;
  bool validate_b = true;
  double output_delta = 0.1;
  double output_eta = 0.1;
};

struct InversionResult {
  SvtSketchHandle svt;
  Vec estimates;    // u(i) ~ R(i,.) A^dag b
  Vec transformed;  // z = tbar(CC^dag) u
  Vec solution;     // xhat = R^dag z materialized
  double condition = 0.0;  // K = ||A||_F^2 / sigma^2
  double epsilon_bound = 0.0;
  bool epsilon_violation = false;
  std::shared_ptr<const OversampledVectorAccess> combination;
  std::shared_ptr<const RandomizedVectorAccess> access;
};

InversionResult matrix_inversion(const OversampledMatrixAccess& a, const Vec& b, const InversionParams& params,
                                 Rng& rng);

}  // namespace dequant
