#include "dequant/oracle.hh"

#include <cmath>
#include <stdexcept>

#include "dequant/estimators.hh"

namespace dequant {

namespace {

Mat eigen_transform(const Mat& a, const std::function<Complex(double)>& g) {
  const Mat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  Vec values(eig.eigenvalues().size());
  for (Index i = 0; i < values.size(); ++i) values(i) = g(std::max(0.0, eig.eigenvalues()(i)));
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

Mat dense_svt(const Mat& a, const SmoothFunction& f) { return eigen_transform(a, f.f); }

Mat dense_svt(const Mat& a, const EvenPolynomial& p) {
  return eigen_transform(a, [&p](double x) { return Complex(p(std::sqrt(x))); });
}

Mat polynomial_power_form(const Mat& a, const EvenPolynomial& p) {
  const Mat gram = a.adjoint() * a;
  Mat power = Mat::Identity(a.cols(), a.cols());
  Mat out = Mat::Zero(a.cols(), a.cols());
  for (double c : p.even_coefficients()) {
    out += c * power;
    power = (power * gram).eval();
  }
  return out;
}

Mat singular_value_transform(const Mat& a, const std::function<double(double)>& f) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RealVec s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s(i) = f(s(i));
  return svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
}

InnerProductMoments exact_inner_product_moments(const Vec& u, const Vec& v, const Distribution& p_tilde,
                                                double epsilon, double nu_hat) {
  const double u_norm = u.norm();
  InnerProductMoments m{0.0, 0.0};
  for (Index i = 0; i < u.size(); ++i) {
    const double pi = p_tilde[static_cast<std::size_t>(i)];
    if (pi == 0.0) continue;
    const Complex c = inner_product_contribution(u(i), v(i), u_norm, nu_hat, epsilon);
    m.mean += pi * c;
    m.second_moment += pi * std::norm(c);
  }
  return m;
}

Complex exact_oversampled_expectation(const Vec& u, const Vec& ubar, const Vec& v, const Distribution& p_tilde,
                                      double epsilon) {
  const double bound_sq = ubar.squaredNorm();
  const double phi = bound_sq / u.squaredNorm();
  const double u_norm = u.norm();
  const double v_norm = v.norm();
  Complex mean = 0.0;
  for (Index s = 0; s < u.size(); ++s) {
    const double ps = p_tilde[static_cast<std::size_t>(s)];
    const double w = std::norm(ubar(s));
    if (ps == 0.0 || w == 0.0) continue;
    if (in_oversampled_threshold_set(u(s), v(s), u_norm, v_norm, phi, epsilon)) continue;
    mean += ps * u(s) * std::conj(v(s)) * (bound_sq / w);
  }
  return mean;
}

Mat enumerate_sketch_expectation(const Mat& x, const Mat& y, const Distribution& p_tilde, const Distribution& p,
                                 Index r, const std::vector<bool>& excluded) {
  const Index m = x.rows();
  // Each of the r rows contributes independently, so the expectation of the
  // sum equals r times the one-row expectation; enumerate tuples anyway so the
  // check does not rely on that identity.
  Mat total = Mat::Zero(x.cols(), y.cols());
  std::vector<Index> tuple(static_cast<std::size_t>(r), 0);
  while (true) {
    double prob = 1.0;
    Mat value = Mat::Zero(x.cols(), y.cols());
    for (Index k = 0; k < r; ++k) {
      const Index s = tuple[static_cast<std::size_t>(k)];
      prob *= p_tilde[static_cast<std::size_t>(s)];
      const double ps = p[static_cast<std::size_t>(s)];
      if (ps == 0.0 || (!excluded.empty() && excluded[static_cast<std::size_t>(s)])) continue;
      value += x.row(s).adjoint() * y.row(s) / (static_cast<double>(r) * ps);
    }
    if (prob > 0.0) total += prob * value;
    Index k = 0;
    while (k < r && ++tuple[static_cast<std::size_t>(k)] == m) tuple[static_cast<std::size_t>(k++)] = 0;
    if (k == r) break;
  }
  return total;
}

std::variant<Mat, AmbiguityReport> exact_truncation(const Mat& a, double sigma, double xi, TruncationMode mode) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& s = svd.singularValues();
  const double lo = sigma * (1.0 - xi);
  const double hi = mode == TruncationMode::LowRank ? sigma * (1.0 + xi) : sigma;
  AmbiguityReport report{mode, lo, hi, {}};
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) >= lo && s(i) < hi) report.singular_values_in_band.push_back(s(i));
  if (!report.singular_values_in_band.empty()) return report;

  const Mat& u = svd.matrixU();
  const Mat& v = svd.matrixV();
  if (mode == TruncationMode::LowRank) {
    Mat out = Mat::Zero(a.rows(), a.cols());
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) >= hi) out += s(i) * u.col(i) * v.col(i).adjoint();
    return out;
  }
  Mat out = Mat::Zero(a.cols(), a.rows());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) >= hi) out += (1.0 / s(i)) * v.col(i) * u.col(i).adjoint();
  return out;
}

double residual_outside_retained(const Mat& a, const Vec& b, double sigma) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  Vec projected = Vec::Zero(b.size());
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) >= sigma) {
      const auto col = svd.matrixU().col(i);
      projected += col * (col.adjoint() * b)(0);
    }
  return (b - projected).norm();
}

RejectionOutcome rejection_closed_form(const Distribution& p1, const Distribution& p2, const Distribution& p2_tilde,
                                       double m) {
  if (p1.size() != p2.size() || p2.size() != p2_tilde.size())
    throw std::invalid_argument("rejection_closed_form: length mismatch");
  RejectionOutcome out;
  out.output.assign(p1.size(), 0.0);
  for (std::size_t j = 0; j < p1.size(); ++j) {
    double ratio = 0.0;
    if (p2[j] > 0.0) ratio = p1[j] / (m * p2[j]);
    else if (p1[j] > 0.0) throw std::domain_error("rejection_closed_form: p1 not dominated by m p2");
    if (ratio > 1.0 + 1e-12) throw std::domain_error("rejection_closed_form: ratio exceeds 1");
    out.output[j] = p2_tilde[j] * ratio;
    out.acceptance += out.output[j];
  }
  if (out.acceptance > 0.0)
    for (auto& x : out.output) x /= out.acceptance;
  return out;
}

}  // namespace dequant
