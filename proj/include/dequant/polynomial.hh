#pragma once

#include <vector>

#include "dequant/sketching.hh"

namespace dequant {

/// p(x) = a_0 + a_2 x^2 + ... + a_d x^d, stored by even coefficients.
/// The reduced form q satisfies p(x) - p(0) = q(x^2).
class EvenPolynomial {
 public:
  /// even_coefficients[k] multiplies x^(2k).
  explicit EvenPolynomial(std::vector<double> even_coefficients);

  int degree() const { return 2 * (static_cast<int>(coeffs_.size()) - 1); }
  const std::vector<double>& even_coefficients() const { return coeffs_; }
  double constant_term() const { return coeffs_.front(); }

  double operator()(double x) const;
  /// q(y) = sum_{k >= 1} a_{2k} y^k.
  double reduced(double y) const;
  /// q(y) / y, extended by a_2 at y = 0.
  double reduced_over_y(double y) const;

  /// max |p| on [-1, 1] over a uniform grid with both endpoints.
  double max_abs_on_unit_interval(int grid = 10001) const;
  bool bounded_on_unit_interval(int grid = 10001) const { return max_abs_on_unit_interval(grid) <= 1.0 + 1e-12; }

  /// q clamped outside [-1, 1] (constant beyond the endpoints), with its
  /// Lipschitz data evaluated numerically on a grid plus the tails.
  SmoothFunction clipped() const;

 private:
  std::vector<double> coeffs_;
};

enum class TransferKind { Recommendation, Inversion };

/// Piecewise transfer functions acting on eigenvalues x of A^dag A.
///
/// Recommendation: 1 above (1+xi)^2 sigma^2, 0 below (1-xi)^2 sigma^2, linear between.
/// Inversion: 1/x from sigma^2 on, 0 below (1-xi)^2 sigma^2, linear between.
class ThresholdTransfer {
 public:
  ThresholdTransfer(TransferKind kind, double sigma, double xi);

  double t(double x) const;
  double tbar(double x) const;
  double lipschitz() const;
  double lipschitz_bar() const;
  double t_max() const;
  double tbar_max() const;
  double ramp_start() const { return (1.0 - xi_) * (1.0 - xi_) * sigma_ * sigma_; }
  TransferKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double xi() const { return xi_; }

  SmoothFunction as_smooth_function() const;

 private:
  TransferKind kind_;
  double sigma_;
  double xi_;
};

}  // namespace dequant
