#include "dequant/polynomial.hh"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dequant {

namespace {

// Horner in y for coefficients c[0] + c[1] y + ...
double horner(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

double max_abs_on(const std::vector<double>& c, double lo, double hi, int grid) {
  double best = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double y = lo + (hi - lo) * k / (grid - 1);
    best = std::max(best, std::abs(horner(c, y)));
  }
  return best;
}

}  // namespace

EvenPolynomial::EvenPolynomial(std::vector<double> even_coefficients) : coeffs_(std::move(even_coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("EvenPolynomial: no coefficients");
}

double EvenPolynomial::operator()(double x) const { return horner(coeffs_, x * x); }

double EvenPolynomial::reduced(double y) const { return horner(coeffs_, y) - coeffs_.front(); }

double EvenPolynomial::reduced_over_y(double y) const {
  // q(y)/y = a_2 + a_4 y + ...
  if (coeffs_.size() < 2) return 0.0;
  return horner(std::vector<double>(coeffs_.begin() + 1, coeffs_.end()), y);
}

double EvenPolynomial::max_abs_on_unit_interval(int grid) const {
  double best = 0.0;
  for (int k = 0; k < grid; ++k) best = std::max(best, std::abs((*this)(-1.0 + 2.0 * k / (grid - 1))));
  return best;
}

SmoothFunction EvenPolynomial::clipped() const {
  const int grid = 10001;
  std::vector<double> q = coeffs_;
  q.front() = 0.0;
  const std::vector<double> qbar = coeffs_.size() < 2 ? std::vector<double>{0.0}
                                                      : std::vector<double>(coeffs_.begin() + 1, coeffs_.end());
  const double q_lo = reduced(-1.0), q_hi = reduced(1.0);

  SmoothFunction f;
  f.name = "clipped-even-polynomial";
  auto self = *this;
  f.f = [self, q_lo, q_hi](double y) {
    if (y <= -1.0) return Complex(q_lo);
    if (y >= 1.0) return Complex(q_hi);
    return Complex(self.reduced(y));
  };
  f.fbar = [self, q_lo, q_hi](double y) {
    if (y <= -1.0) return Complex(q_lo / y);
    if (y >= 1.0) return Complex(q_hi / y);
    return Complex(self.reduced_over_y(y));
  };
  // Beyond [-1, 1]: f is flat and |d/dy (q(+-1)/y)| <= |q(+-1)|.
  f.lipschitz = max_abs_on(derivative(q), -1.0, 1.0, grid);
  f.lipschitz_bar = std::max({max_abs_on(derivative(qbar), -1.0, 1.0, grid), std::abs(q_lo), std::abs(q_hi)});
  f.fbar_max = max_abs_on(qbar, -1.0, 1.0, grid);
  return f;
}

// ---------------------------------------------------------------------------

ThresholdTransfer::ThresholdTransfer(TransferKind kind, double sigma, double xi) : kind_(kind), sigma_(sigma), xi_(xi) {
  if (!(sigma > 0.0)) throw std::domain_error("ThresholdTransfer: sigma must be positive");
  if (!(xi > 0.0 && xi < 1.0)) throw std::domain_error("ThresholdTransfer: xi must lie in (0, 1)");
}

double ThresholdTransfer::t(double x) const {
  const double s2 = sigma_ * sigma_;
  const double lo = ramp_start();
  if (x < lo) return 0.0;
  if (kind_ == TransferKind::Recommendation) {
    const double hi = (1.0 + xi_) * (1.0 + xi_) * s2;
    if (x >= hi) return 1.0;
    return (x - lo) / (4.0 * xi_ * s2);
  }
  if (x >= s2) return 1.0 / x;
  return (x - lo) / (xi_ * (2.0 - xi_) * s2 * s2);
}

double ThresholdTransfer::tbar(double x) const {
  const double s2 = sigma_ * sigma_;
  const double lo = ramp_start();
  if (x < lo) return 0.0;
  if (kind_ == TransferKind::Recommendation) {
    const double hi = (1.0 + xi_) * (1.0 + xi_) * s2;
    if (x >= hi) return 1.0 / x;
    return 1.0 / (4.0 * xi_ * s2) - lo / (4.0 * xi_ * s2 * x);
  }
  if (x >= s2) return 1.0 / (x * x);
  return (x - lo) / (xi_ * (2.0 - xi_) * s2 * s2 * x);
}

double ThresholdTransfer::lipschitz() const {
  const double s2 = sigma_ * sigma_;
  if (kind_ == TransferKind::Recommendation) return 1.0 / (4.0 * xi_ * s2);
  return 1.0 / (xi_ * (2.0 - xi_) * s2 * s2);
}

double ThresholdTransfer::lipschitz_bar() const {
  const double s2 = sigma_ * sigma_;
  const double w = (1.0 - xi_) * (1.0 - xi_);
  if (kind_ == TransferKind::Recommendation) return 1.0 / (4.0 * xi_ * w * s2 * s2);
  return 1.0 / (xi_ * (2.0 - xi_) * w * s2 * s2 * s2);
}

double ThresholdTransfer::t_max() const {
  return kind_ == TransferKind::Recommendation ? 1.0 : 1.0 / (sigma_ * sigma_);
}

double ThresholdTransfer::tbar_max() const {
  const double s2 = sigma_ * sigma_;
  if (kind_ == TransferKind::Recommendation) return 1.0 / ((1.0 + xi_) * (1.0 + xi_) * s2);
  return 1.0 / (s2 * s2);
}

SmoothFunction ThresholdTransfer::as_smooth_function() const {
  SmoothFunction f;
  f.name = kind_ == TransferKind::Recommendation ? "recommendation-threshold" : "inversion-threshold";
  auto self = *this;
  f.f = [self](double x) { return Complex(self.t(x)); };
  f.fbar = [self](double x) { return Complex(self.tbar(x)); };
  f.lipschitz = lipschitz();
  f.lipschitz_bar = lipschitz_bar();
  f.fbar_max = tbar_max();
  return f;
}

}  // namespace dequant
