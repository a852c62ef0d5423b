#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dequant/polynomial.hh"
#include "dequant/sketching.hh"

namespace dequant {

// Dense reference computations. Intended for matrices up to ~200 x 200.

/// f(A^dag A) via the eigendecomposition of A^dag A (eigenvalues clamped at 0).
Mat dense_svt(const Mat& a, const SmoothFunction& f);
/// p(sqrt(A^dag A)) via the eigendecomposition of A^dag A.
Mat dense_svt(const Mat& a, const EvenPolynomial& p);
/// a_0 I + a_2 A^dag A + a_4 (A^dag A)^2 + ... by repeated products.
Mat polynomial_power_form(const Mat& a, const EvenPolynomial& p);
/// U f(Sigma) V^dag for f with f(0) = 0.
Mat singular_value_transform(const Mat& a, const std::function<double(double)>& f);

struct InnerProductMoments {
  Complex mean;          // E over p~ of the single-sample contribution
  double second_moment;  // E |contribution|^2
};

/// Exact moments of the robust single-sample inner-product estimator under p~.
InnerProductMoments exact_inner_product_moments(const Vec& u, const Vec& v, const Distribution& p_tilde,
                                                double epsilon, double nu_hat);

/// Exact mean of the oversampled single-sample estimator under p~ over ubar.
Complex exact_oversampled_expectation(const Vec& u, const Vec& ubar, const Vec& v, const Distribution& p_tilde,
                                      double epsilon);

/// E[X^dag Sbar^dag Sbar Y] by enumerating all m^r index tuples, where each
/// index is drawn from `p_tilde`, scales use `p`, and rows sampling an index
/// with excluded[j] set are zeroed.
Mat enumerate_sketch_expectation(const Mat& x, const Mat& y, const Distribution& p_tilde, const Distribution& p,
                                 Index r, const std::vector<bool>& excluded = {});

enum class TruncationMode { LowRank, PseudoInverse };

struct AmbiguityReport {
  TruncationMode mode;
  double band_lo;
  double band_hi;
  std::vector<double> singular_values_in_band;
};

/// LowRank: sum of s u v^dag over s >= sigma (1 + xi)  (m x n).
/// PseudoInverse: sum of v u^dag / s over s >= sigma   (n x m).
/// Returns the report when a singular value lies in the ambiguity band
/// [sigma (1 - xi), sigma (1 + xi)) resp. [sigma (1 - xi), sigma).
std::variant<Mat, AmbiguityReport> exact_truncation(const Mat& a, double sigma, double xi, TruncationMode mode);

/// ||b - P b|| with P the projector onto left singular vectors of A with
/// singular value >= sigma.
double residual_outside_retained(const Mat& a, const Vec& b, double sigma);

struct RejectionOutcome {
  double acceptance = 0.0;
  Distribution output;  // conditional on acceptance
};

/// Closed form of one rejection round: p_acc = sum p~2 p1 / (m p2) and
/// output(j) = p~2(j) p1(j) / (m p_acc p2(j)).
RejectionOutcome rejection_closed_form(const Distribution& p1, const Distribution& p2, const Distribution& p2_tilde,
                                       double m);

}  // namespace dequant
