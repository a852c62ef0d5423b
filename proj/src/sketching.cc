#include "dequant/sketching.hh"

#include <cmath>
#include <stdexcept>

#include "dequant/access_transforms.hh"

namespace dequant {

Eigen::MatrixXd SketchDescription::dense() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size(), source_dim);
  for (Index k = 0; k < size(); ++k) s(k, indices[static_cast<std::size_t>(k)]) += scales[static_cast<std::size_t>(k)];
  return s;
}

SketchDescription draw_sketch(const ProbabilityFn& p, const IndexSampler& sampler, Index r, Index source_dim,
                              Rng& rng) {
  if (r < 1) throw std::invalid_argument("draw_sketch: r must be positive");
  SketchDescription s;
  s.source_dim = source_dim;
  s.indices.reserve(static_cast<std::size_t>(r));
  s.scales.reserve(static_cast<std::size_t>(r));
  for (Index k = 0; k < r; ++k) {
    const Index idx = sampler(rng);
    const double pk = p(idx);
    s.indices.push_back(idx);
    s.scales.push_back(pk > 0.0 ? 1.0 / std::sqrt(static_cast<double>(r) * pk) : 0.0);
  }
  return s;
}

SketchDescription draw_sketch(const Distribution& p, const IndexSampler& sampler, Index r, Rng& rng) {
  return draw_sketch([&p](Index i) { return p[static_cast<std::size_t>(i)]; }, sampler, r,
                     static_cast<Index>(p.size()), rng);
}

SketchDescription sketch_from_matrix_access(const OversampledMatrixAccess& a, Index r, Rng& rng) {
  const auto& norms = a.bound().row_norms();
  const double total = norms.norm() * norms.norm();
  return draw_sketch([&norms, total](Index i) { return std::norm(norms.query(i)) / total; },
                     [&norms](Rng& g) { return norms.sample(g); }, r, a.rows(), rng);
}

SketchDescription joint_sketch(const OversampledMatrixAccess& a, const OversampledMatrixAccess& b, Index r,
                               Rng& rng) {
  if (a.rows() != b.rows()) throw std::invalid_argument("joint_sketch: row counts differ");
  const auto& na = a.bound().row_norms();
  const auto& nb = b.bound().row_norms();
  const double ta = na.norm() * na.norm();
  const double tb = nb.norm() * nb.norm();
  return draw_sketch(
      [&](Index i) { return 0.5 * (std::norm(na.query(i)) / ta + std::norm(nb.query(i)) / tb); },
      [&](Rng& g) { return g.coin() ? na.sample(g) : nb.sample(g); }, r, a.rows(), rng);
}

Mat apply_sketch(const SketchDescription& s, const Mat& a) {
  Mat out(s.size(), a.cols());
  for (Index k = 0; k < s.size(); ++k) out.row(k) = s.scales[static_cast<std::size_t>(k)] * a.row(s.indices[static_cast<std::size_t>(k)]);
  return out;
}

Mat apply_sketch(const SketchDescription& s, const OversampledMatrixAccess& a) {
  Mat out(s.size(), a.cols());
  for (Index k = 0; k < s.size(); ++k) {
    const double alpha = s.scales[static_cast<std::size_t>(k)];
    const Index src = s.indices[static_cast<std::size_t>(k)];
    for (Index j = 0; j < a.cols(); ++j) out(k, j) = alpha == 0.0 ? Complex(0.0) : alpha * a.query(src, j);
  }
  return out;
}

double frobenius_deviation_bound(double exact_sq, double phi, double epsilon, double delta, Index r) {
  return (2.0 * epsilon + std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(r)))) * phi * exact_sq;
}

FrobeniusCheck frobenius_check(const SketchDescription& s, const Mat& a, double phi, double epsilon, double delta) {
  FrobeniusCheck out;
  const Mat sa = apply_sketch(s, a);
  out.sketched_sq = sa.squaredNorm();
  out.exact_sq = a.squaredNorm();
  out.deviation_bound = frobenius_deviation_bound(out.exact_sq, phi, epsilon, delta, s.size());
  out.within_bound = std::abs(out.sketched_sq - out.exact_sq) <= out.deviation_bound;
  out.row_bound = phi * out.exact_sq / static_cast<double>(s.size());
  for (Index k = 0; k < sa.rows(); ++k) out.max_row_sq = std::max(out.max_row_sq, sa.row(k).squaredNorm());
  out.rows_within_bound = out.max_row_sq <= out.row_bound * (1.0 + 1e-12);
  return out;
}

std::vector<bool> one_sided_threshold_set(const Mat& x, const Mat& y, double epsilon, double phi) {
  if (x.rows() != y.rows()) throw std::invalid_argument("one-sided threshold: row counts differ");
  std::vector<bool> gamma(static_cast<std::size_t>(x.rows()), false);
  if (epsilon <= 0.0) return gamma;
  const double coeff = y.norm() / (std::sqrt(2.0 * phi * epsilon) * x.norm());
  for (Index j = 0; j < x.rows(); ++j) gamma[static_cast<std::size_t>(j)] = y.row(j).norm() >= coeff * x.row(j).norm();
  return gamma;
}

Mat matmul_one_sided(const Mat& x, const Mat& y, const SketchDescription& s, double epsilon, double phi) {
  const auto gamma = one_sided_threshold_set(x, y, epsilon, phi);
  Mat out = Mat::Zero(x.cols(), y.cols());
  for (Index k = 0; k < s.size(); ++k) {
    const Index src = s.indices[static_cast<std::size_t>(k)];
    if (gamma[static_cast<std::size_t>(src)]) continue;
    const double a2 = s.scales[static_cast<std::size_t>(k)] * s.scales[static_cast<std::size_t>(k)];
    out.noalias() += a2 * x.row(src).adjoint() * y.row(src);
  }
  return out;
}

double one_sided_bound(double epsilon, double phi, Index r, double delta, double x_frob, double y_frob) {
  return (2.0 * std::sqrt(2.0 * epsilon) + std::sqrt(2.0 / (static_cast<double>(r) * delta))) * std::sqrt(phi) *
         x_frob * y_frob;
}

Mat matmul_joint(const Mat& x, const Mat& y, const SketchDescription& s) {
  if (x.rows() != y.rows()) throw std::invalid_argument("matmul_joint: row counts differ");
  Mat out = Mat::Zero(x.cols(), y.cols());
  for (Index k = 0; k < s.size(); ++k) {
    const Index src = s.indices[static_cast<std::size_t>(k)];
    const double a2 = s.scales[static_cast<std::size_t>(k)] * s.scales[static_cast<std::size_t>(k)];
    if (a2 == 0.0) continue;
    out.noalias() += a2 * x.row(src).adjoint() * y.row(src);
  }
  return out;
}

double joint_bound(double epsilon, double phi_x, double phi_y, Index r, double delta, double x_frob, double y_frob) {
  return std::sqrt(phi_x * phi_y) * (2.0 * epsilon + std::sqrt(7.0 * std::log(2.0 / delta) / static_cast<double>(r))) *
         x_frob * y_frob;
}

// ---------------------------------------------------------------------------

SmoothFunction identity_function() {
  SmoothFunction f;
  f.name = "identity";
  f.f = [](double x) { return Complex(x); };
  f.fbar = [](double) { return Complex(1.0); };
  f.lipschitz = 1.0;
  f.lipschitz_bar = 0.0;
  f.fbar_max = 1.0;
  return f;
}

SmoothFunction square_function(double domain_max) {
  SmoothFunction f;
  f.name = "square";
  f.f = [](double x) { return Complex(x * x); };
  f.fbar = [](double x) { return Complex(x); };
  f.lipschitz = 2.0 * domain_max;
  f.lipschitz_bar = 1.0;
  f.fbar_max = domain_max;
  f.domain_lo = 0.0;
  f.domain_hi = domain_max;
  return f;
}

SvtRequirements svt_requirements(double phi, double frobenius, const SmoothFunction& f, double gamma, double delta,
                                 double chi) {
  const double phi2 = 2.0 * phi;
  const double a2 = frobenius * frobenius;
  const double a4 = a2 * a2;
  const double log6 = std::log(6.0 / delta);
  const double inv_chi2 = std::isinf(chi) ? 0.0 : 1.0 / (chi * chi);
  SvtRequirements req;
  req.epsilon_max = 1.0 / (8.0 * phi);
  if (!std::isinf(chi)) req.epsilon_max = std::min(req.epsilon_max, chi / (24.0 * (phi + phi2) * a2));
  if (f.lipschitz > 0) req.epsilon_max = std::min(req.epsilon_max, gamma / (24.0 * f.lipschitz * phi * a2));
  if (f.lipschitz_bar > 0) req.epsilon_max = std::min(req.epsilon_max, gamma / (48.0 * f.lipschitz_bar * phi2 * a4));
  const double l2 = f.lipschitz * f.lipschitz;
  const double lb2 = f.lipschitz_bar * f.lipschitz_bar;
  req.r_min = std::max(2.0 * phi * phi * log6, 112.0 * phi * phi * a4 * (log6 * inv_chi2 + log6 * l2 / (gamma * gamma)));
  req.c_min = 112.0 * phi2 * phi2 * a4 * (log6 * inv_chi2 + 4.0 * log6 * lb2 * a4 / (gamma * gamma));
  return req;
}

Mat SvtSketchHandle::c_matrix() const {
  Mat c(r(), column_sketch.size());
  for (Index k = 0; k < column_sketch.size(); ++k)
    c.col(k) = column_sketch.scales[static_cast<std::size_t>(k)] * sketched_rows.col(column_sketch.indices[static_cast<std::size_t>(k)]);
  return c;
}

Mat SvtSketchHandle::fbar_matrix() const {
  const Index rr = r();
  Mat m = fbar_at_zero * (Mat::Identity(rr, rr) - eigenvectors * eigenvectors.adjoint());
  m.noalias() += eigenvectors * fbar_values.asDiagonal() * eigenvectors.adjoint();
  return m;
}

Vec SvtSketchHandle::apply_fbar(const Vec& x) const {
  const Vec coords = eigenvectors.adjoint() * x;
  Vec out = fbar_at_zero * (x - eigenvectors * coords);
  out.noalias() += eigenvectors * (fbar_values.array() * coords.array()).matrix();
  return out;
}

Mat SvtSketchHandle::transform_matrix() const {
  // Complement terms vanish: R^dag annihilates range(R)^perp.
  const Mat projected = eigenvectors.adjoint() * sketched_rows;  // k x n
  return projected.adjoint() * fbar_values.asDiagonal() * projected;
}

Vec SvtSketchHandle::apply(const Vec& b) const {
  return sketched_rows.adjoint() * apply_fbar(sketched_rows * b);
}

SvtSketchHandle svt_sketch(const OversampledMatrixAccess& a, const SmoothFunction& f, const SvtParams& params,
                           Rng& rng) {
  const double phi = a.phi();
  const double frob = a.frobenius();
  const auto req = svt_requirements(phi, frob, f, params.gamma, params.delta, params.chi);
  if (params.enforce_epsilon && a.epsilon() > req.epsilon_max)
    throw std::domain_error("svt_sketch: epsilon exceeds the admissible bound");
  const Index r = params.r > 0 ? params.r : static_cast<Index>(std::ceil(req.r_min));
  const Index c = params.c > 0 ? params.c : static_cast<Index>(std::ceil(req.c_min));

  SvtSketchHandle h;
  const double target = frob * frob;
  for (int attempt = 1;; ++attempt) {
    Rng stream = rng.split(static_cast<std::uint64_t>(attempt));
    h.row_sketch = sketch_from_matrix_access(a, r, stream);
    h.sketched_rows = apply_sketch(h.row_sketch, a);
    h.sketched_frobenius_sq = h.sketched_rows.squaredNorm();
    h.attempts = attempt;
    if (h.sketched_frobenius_sq >= 0.5 * target && h.sketched_frobenius_sq <= 1.5 * target) break;
    if (attempt >= params.max_attempts)
      throw std::runtime_error("svt_sketch: Frobenius precondition failed after retries");
  }

  h.rows_access = std::make_shared<const OversampledMatrixAccess>(access_of_SA(a, h.row_sketch));
  h.columns_access = std::make_shared<const OversampledMatrixAccess>(access_of_SA_dagger(a, h.row_sketch));
  h.phi_rows = h.rows_access->phi();
  Rng column_stream = rng.split(0x7e);
  h.column_sketch = sketch_from_matrix_access(*h.columns_access, c, column_stream);

  // CC^dag = Q G Q^dag with Q an orthonormal basis of range(R) and
  // G = K D K^dag, K = Q^dag R, D = diag of summed squared column scales.
  const Mat& rows = h.sketched_rows;
  const Index n = rows.cols();
  const Index k = std::min(rows.rows(), n);
  Eigen::HouseholderQR<Mat> qr(rows);
  const Mat q = qr.householderQ() * Mat::Identity(rows.rows(), k);
  const Mat coords = q.adjoint() * rows;
  RealVec weights = RealVec::Zero(n);
  for (Index t = 0; t < c; ++t) {
    const double beta = h.column_sketch.scales[static_cast<std::size_t>(t)];
    weights(h.column_sketch.indices[static_cast<std::size_t>(t)]) += beta * beta;
  }
  Mat g = coords * weights.asDiagonal() * coords.adjoint();
  g = 0.5 * (g + g.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  h.eigenvalues = eig.eigenvalues();
  const double top = h.eigenvalues.size() ? h.eigenvalues.maxCoeff() : 0.0;
  for (Index i = 0; i < h.eigenvalues.size(); ++i)
    if (h.eigenvalues(i) < 1e-12 * top) h.eigenvalues(i) = 0.0;
  h.eigenvectors = q * eig.eigenvectors();
  h.fbar_values.resize(h.eigenvalues.size());
  for (Index i = 0; i < h.eigenvalues.size(); ++i) h.fbar_values(i) = f.fbar(h.eigenvalues(i));
  h.fbar_at_zero = f.fbar(0.0);
  return h;
}

}  // namespace dequant
