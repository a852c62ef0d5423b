#include "dequant/estimators.hh"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dequant {

namespace {

EstimationParams resolved(const EstimationParams& p, double phi) {
  if (!(p.xi > 0.0)) throw std::domain_error("estimation: xi must be positive");
  if (!(p.delta > 0.0 && p.delta <= 1.0)) throw std::domain_error("estimation: delta must lie in (0, 1]");
  auto d = EstimationParams::defaults(p.xi, p.delta, phi);
  if (p.batch_size > 0) d.batch_size = p.batch_size;
  if (p.batches > 0) d.batches = p.batches;
  return d;
}

double median_of(std::vector<double>& xs) {
  const auto n = xs.size();
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(xs.begin(), mid);
  return 0.5 * (lo + hi);
}

// Runs `batches` batches of `batch_size` draws of `draw` on split streams.
template <class Draw>
Complex median_of_means(const EstimationParams& p, Rng& rng, Draw&& draw) {
  std::vector<Complex> means(static_cast<std::size_t>(p.batches));
  for (Index b = 0; b < p.batches; ++b) {
    Rng stream = rng.split(static_cast<std::uint64_t>(b));
    Complex sum = 0.0;
    for (Index t = 0; t < p.batch_size; ++t) sum += draw(stream);
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(p.batch_size);
  }
  // Advance the parent so repeated calls on one stream differ.
  rng();
  return powering_median(means);
}

}  // namespace

EstimationParams EstimationParams::defaults(double xi, double delta, double phi) {
  EstimationParams p;
  p.xi = xi;
  p.delta = delta;
  p.batch_size = static_cast<Index>(std::ceil(16.0 * phi / (xi * xi)));
  p.batches = static_cast<Index>(std::ceil(18.0 * std::log(2.0 / delta)));
  return p;
}

Complex powering_median(std::span<const Complex> trials) {
  if (trials.empty()) throw std::invalid_argument("powering_median: empty input");
  std::vector<double> re, im;
  re.reserve(trials.size());
  im.reserve(trials.size());
  for (const auto& z : trials) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {median_of(re), median_of(im)};
}

bool in_threshold_set(Complex u_i, Complex v_i, double u_norm, double nu_hat, double epsilon) {
  if (epsilon <= 0.0) return false;
  return std::abs(v_i) >= nu_hat / (std::sqrt(2.0 * epsilon) * u_norm) * std::abs(u_i);
}

Complex inner_product_contribution(Complex u_i, Complex v_i, double u_norm, double nu_hat, double epsilon) {
  if (in_threshold_set(u_i, v_i, u_norm, nu_hat, epsilon)) return 0.0;
  if (u_i == Complex(0.0)) throw std::logic_error("inner product: zero entry outside the threshold set");
  return std::conj(v_i) * (u_norm * u_norm) / std::conj(u_i);
}

Complex inner_product_sq(const VectorAccess& u, const QueryFn& v, double nu_hat, const EstimationParams& params,
                         Rng& rng) {
  if (!(nu_hat > 0.0)) throw std::domain_error("inner_product_sq: nu_hat must be positive");
  const auto p = resolved(params, 1.0);
  const double u_norm = u.norm();
  const double eps = u.epsilon();
  return median_of_means(p, rng, [&](Rng& g) {
    const Index i = u.sample(g);
    const Complex ui = u.query(i);
    const Complex vi = v(i);
    // With eps = 0 the sampler never returns a zero entry; with eps > 0 such
    // indices satisfy the threshold test and contribute 0.
    if (ui == Complex(0.0) && eps <= 0.0) throw std::logic_error("inner_product_sq: sampled a zero entry");
    return inner_product_contribution(ui, vi, u_norm, nu_hat, eps);
  });
}

double inner_product_sq_bound(double epsilon, double xi, double u_norm, double nu_hat) {
  return (2.0 * std::sqrt(2.0 * epsilon) + xi) * u_norm * nu_hat;
}

bool in_oversampled_threshold_set(Complex u_j, Complex v_j, double u_norm, double v_norm, double phi, double epsilon) {
  if (epsilon <= 0.0) return false;
  return std::abs(v_j) >= v_norm / (std::sqrt(2.0 * phi * epsilon) * u_norm) * std::abs(u_j);
}

Complex inner_product_osq(const OversampledVectorAccess& u, const QueryFn& v, double v_norm,
                          const EstimationParams& params, Rng& rng) {
  if (!(v_norm > 0.0)) throw std::domain_error("inner_product_osq: ||v|| must be positive");
  const double phi = u.phi();
  const auto p = resolved(params, phi);
  const auto& bound = u.bound();
  const double bound_sq = bound.norm() * bound.norm();
  const double u_norm = u.norm();
  const double eps = u.epsilon();
  return median_of_means(p, rng, [&](Rng& g) -> Complex {
    const Index s = bound.sample(g);
    const double weight = std::norm(bound.query(s));
    if (weight == 0.0) return 0.0;  // zero sketch row
    const Complex us = u.query(s);
    const Complex vs = v(s);
    if (in_oversampled_threshold_set(us, vs, u_norm, v_norm, phi, eps)) return 0.0;
    return us * std::conj(vs) * (bound_sq / weight);
  });
}

double inner_product_osq_bound(double epsilon, double phi, double xi, double u_norm, double v_norm) {
  return (2.0 * std::sqrt(2.0 * phi * epsilon) + xi) * u_norm * v_norm;
}

OversampledVectorAccess flattened_access(const OversampledMatrixAccess& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  auto bound = a.bound_ptr();
  AccessCallbacks cb;
  cb.size = m * n;
  cb.query = [bound, n](Index k) { return bound->query(k / n, k % n); };
  cb.sample = [bound, n](Rng& rng) -> Index {
    const Index i = bound->row_norms().sample(rng);
    const auto row = bound->row(i);
    return row ? i * n + row->sample(rng) : i * n;
  };
  cb.norm = bound->frobenius();
  cb.epsilon = 2.0 * bound->epsilon();
  cb.distribution = [bound, m, n] {
    Distribution p(static_cast<std::size_t>(m * n), 0.0);
    const auto rows = bound->row_norms().sampler_distribution();
    for (Index i = 0; i < m; ++i) {
      const double pi = rows[static_cast<std::size_t>(i)];
      if (pi == 0.0) continue;
      const auto row = bound->row(i);
      if (!row) {
        p[static_cast<std::size_t>(i * n)] += pi;
        continue;
      }
      const auto pj = row->sampler_distribution();
      for (Index j = 0; j < n; ++j) p[static_cast<std::size_t>(i * n + j)] += pi * pj[static_cast<std::size_t>(j)];
    }
    return p;
  };
  auto q = a;
  return OversampledVectorAccess([q, n](Index k) { return q.query(k / n, k % n); },
                                 std::make_shared<CallbackVectorAccess>(std::move(cb)), a.phi());
}

Complex bilinear_form(const OversampledMatrixAccess& a, const QueryFn& u, double u_norm, const QueryFn& v,
                      double v_norm, const EstimationParams& params, Rng& rng) {
  if (!(u_norm > 0.0) || !(v_norm > 0.0)) throw std::domain_error("bilinear_form: zero vector norm");
  const Index n = a.cols();
  const auto x = flattened_access(a);
  // (x, y) = sum x conj(y) = u^dag A v with y(i, j) = u(i) conj(v(j)).
  QueryFn y = [&u, &v, n](Index k) { return u(k / n) * std::conj(v(k % n)); };
  return inner_product_osq(x, y, u_norm * v_norm, params, rng);
}

double bilinear_form_bound(double epsilon, double phi, double xi, double u_norm, double a_frob, double v_norm) {
  return (4.0 * std::sqrt(phi * epsilon) + xi) * u_norm * a_frob * v_norm;
}

}  // namespace dequant
