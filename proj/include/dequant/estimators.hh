#pragma once

#include <span>

#include "dequant/core_access.hh"

namespace dequant {

/// Accuracy xi, failure probability delta, and the sampling budget derived
/// from them: batches of `batch_size` samples, combined by a median.
struct EstimationParams {
  double xi = 0.1;
  double delta = 0.01;
  Index batch_size = 0;
  Index batches = 0;

  /// batch_size = ceil(16 phi / xi^2), batches = ceil(18 ln(2 / delta)).
  static EstimationParams defaults(double xi, double delta, double phi = 1.0);
};

/// Median of real parts plus i times median of imaginary parts.
Complex powering_median(std::span<const Complex> trials);

/// Threshold set membership for the robust inner product:
/// |v_i| >= nu_hat / (sqrt(2 eps) ||u||) |u_i|; never a member when eps = 0.
bool in_threshold_set(Complex u_i, Complex v_i, double u_norm, double nu_hat, double epsilon);

/// Single-sample contribution: 0 inside the threshold set, else
/// conj(v_i) ||u||^2 / conj(u_i).
Complex inner_product_contribution(Complex u_i, Complex v_i, double u_norm, double nu_hat, double epsilon);

/// Estimate of (u, v) from sampling access to u and query access to v.
/// nu_hat >= ||v||. Error <= (2 sqrt(2 eps) + xi) ||u|| nu_hat w.p. >= 1 - delta.
Complex inner_product_sq(const VectorAccess& u, const QueryFn& v, double nu_hat, const EstimationParams& params,
                         Rng& rng);
double inner_product_sq_bound(double epsilon, double xi, double u_norm, double nu_hat);

/// Estimate of (u, v) from oversampled access to u; error
/// <= (2 sqrt(2 phi eps) + xi) ||u|| ||v|| w.p. >= 1 - delta.
Complex inner_product_osq(const OversampledVectorAccess& u, const QueryFn& v, double v_norm,
                          const EstimationParams& params, Rng& rng);
double inner_product_osq_bound(double epsilon, double phi, double xi, double u_norm, double v_norm);

/// Threshold set of the oversampled estimator:
/// |v_j| >= ||v|| / (sqrt(2 phi eps) ||u||) |u_j|.
bool in_oversampled_threshold_set(Complex u_j, Complex v_j, double u_norm, double v_norm, double phi, double epsilon);

/// Rows of A flattened row-major into a vector of length m n; the bound is
/// the flattened Abar with a row-then-column sampler (TV <= 2 eps).
OversampledVectorAccess flattened_access(const OversampledMatrixAccess& a);

/// Estimate of u^dag A v; error <= (4 sqrt(phi eps) + xi) ||u|| ||A||_F ||v||.
Complex bilinear_form(const OversampledMatrixAccess& a, const QueryFn& u, double u_norm, const QueryFn& v,
                      double v_norm, const EstimationParams& params, Rng& rng);
double bilinear_form_bound(double epsilon, double phi, double xi, double u_norm, double a_frob, double v_norm);

}  // namespace dequant
