#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dequant/core_access.hh"
#include "dequant/sketching.hh"

namespace dequant {

using RatioFn = std::function<double(Index)>;

/// One round of rejection sampling: draw j from `sampler`, accept with
/// probability ratio(j) = p1(j) / (m p2(j)). std::nullopt on rejection.
/// Throws std::logic_error if ratio(j) > 1.
std::optional<Index> robust_rejection(const RatioFn& ratio, const IndexSampler& sampler, Rng& rng);

/// Randomized sampling-and-query access obtained from an oversampled access by
/// rejection with ratio |u(j)|^2 / |ubar(j)|^2.
class RandomizedVectorAccess {
 public:
  RandomizedVectorAccess(OversampledVectorAccess source, double phi_max, double delta, double eta);

  Index size() const { return source_.size(); }
  Complex query(Index i) const { return source_.query(i); }

  /// Index from the conditional rejection output, or std::nullopt after
  /// `attempts()` rejections.
  std::optional<Index> sample(Rng& rng) const;

  /// sqrt(X) ||ubar|| where X is the acceptance fraction over norm_trials() rounds.
  double estimate_norm(Rng& rng) const;

  Index attempts() const { return attempts_; }
  Index norm_trials() const { return norm_trials_; }
  double delta() const { return delta_; }
  double eta() const { return eta_; }
  /// Declared TV bound 3 eps phi of the conditional output.
  double epsilon() const { return 3.0 * source_.epsilon() * source_.phi(); }
  const OversampledVectorAccess& source() const { return source_; }

  /// Exact single-round acceptance probability and conditional output distribution.
  double acceptance_probability() const;
  Distribution conditional_distribution() const;

 private:
  double ratio(Index j) const;

  OversampledVectorAccess source_;
  double phi_max_;
  double delta_;
  double eta_;
  Index attempts_;
  Index norm_trials_;
};

/// Requires eps < 1/(2 phi) and phi_max >= phi; throws std::domain_error otherwise.
RandomizedVectorAccess to_randomized_access(const OversampledVectorAccess& u, double phi_max, double delta,
                                            double eta);

/// Oversampled access to v = sum_i lambda_i u_i with bounding vector
/// w(j) = sqrt(k sum_i |lambda_i|^2 |ubar_i(j)|^2) for k terms.
///
/// v and w are formed densely once (O(k n)); phi = ||w||^2 / ||v||^2 is exact.
/// Sampling is two-stage: term i with probability proportional to
/// |lambda_i|^2 ||ubar_i||^2, then j from ubar_i's sampler.
OversampledVectorAccess linear_combination_access(const std::vector<OversampledVectorAccess>& terms,
                                                  const std::vector<Complex>& lambda);

/// Oversampled access to SA; bound S Abar, row-norm sampling uniform over
/// the sketch rows with nonzero bound rows.
OversampledMatrixAccess access_of_SA(const OversampledMatrixAccess& a, const SketchDescription& s);

/// Oversampled access to (SA)^dag; rows materialized on demand in O(r).
/// Row-norm sampling picks a uniform nonzero sketch row k, then a column from
/// Abar(s_k)'s sampler.
OversampledMatrixAccess access_of_SA_dagger(const OversampledMatrixAccess& a, const SketchDescription& s);

/// n x 1 matrix with rows u(j); bound rows |ubar(j)|.
OversampledMatrixAccess column_matrix_access(const OversampledVectorAccess& u);

}  // namespace dequant
