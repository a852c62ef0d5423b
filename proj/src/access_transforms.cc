#include "dequant/access_transforms.hh"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dequant {

namespace {

class CallbackMatrixAccess final : public MatrixAccess {
 public:
  CallbackMatrixAccess(Index rows, Index cols, std::function<VectorAccessPtr(Index)> row_fn, VectorAccessPtr norms,
                       double epsilon)
      : rows_(rows), cols_(cols), row_fn_(std::move(row_fn)), norms_(std::move(norms)), epsilon_(epsilon) {}

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  VectorAccessPtr row(Index i) const override { return row_fn_(i); }
  const VectorAccess& row_norms() const override { return *norms_; }
  double epsilon() const override { return epsilon_; }

 private:
  Index rows_, cols_;
  std::function<VectorAccessPtr(Index)> row_fn_;
  VectorAccessPtr norms_;
  double epsilon_;
};

// Sketch rows whose bound rows are nonzero, with their bound row accesses.
struct SketchSupport {
  std::vector<Index> members;                   // sketch row ids k in Delta
  std::vector<VectorAccessPtr> bound_rows;      // Abar(s_k) for each member
  std::vector<VectorAccessPtr> by_sketch_row;   // Abar(s_k) or null, indexed by k
  double bound_frobenius_sq = 0.0;              // ||S Abar||_F^2
};

SketchSupport sketch_support(const OversampledMatrixAccess& a, const SketchDescription& s) {
  if (s.source_dim != a.rows()) throw std::invalid_argument("sketch access: sketch and matrix dimensions differ");
  SketchSupport sup;
  sup.by_sketch_row.resize(static_cast<std::size_t>(s.size()));
  const double abar_sq = a.bound().frobenius() * a.bound().frobenius();
  const double per_row = abar_sq / static_cast<double>(s.size());
  for (Index k = 0; k < s.size(); ++k) {
    const double alpha = s.scales[static_cast<std::size_t>(k)];
    if (alpha == 0.0) continue;
    auto row = a.bound().row(s.indices[static_cast<std::size_t>(k)]);
    if (!row) continue;
    const double energy = alpha * alpha * row->norm() * row->norm();
    if (std::abs(energy - per_row) > 1e-9 * per_row)
      throw std::invalid_argument("sketch access: S is not an importance sketch of the bound");
    sup.members.push_back(k);
    sup.bound_rows.push_back(row);
    sup.by_sketch_row[static_cast<std::size_t>(k)] = row;
    sup.bound_frobenius_sq += energy;
  }
  if (sup.members.empty()) throw std::domain_error("sketch access: sketch has no nonzero rows");
  return sup;
}

double sketched_frobenius_sq(const OversampledMatrixAccess& a, const SketchDescription& s) {
  double total = 0.0;
  for (Index k = 0; k < s.size(); ++k) {
    const double alpha = s.scales[static_cast<std::size_t>(k)];
    if (alpha == 0.0) continue;
    const Index src = s.indices[static_cast<std::size_t>(k)];
    double row_sq = 0.0;
    for (Index j = 0; j < a.cols(); ++j) row_sq += std::norm(a.query(src, j));
    total += alpha * alpha * row_sq;
  }
  return total;
}

}  // namespace

std::optional<Index> robust_rejection(const RatioFn& ratio, const IndexSampler& sampler, Rng& rng) {
  const Index j = sampler(rng);
  const double accept = ratio(j);
  if (accept > 1.0 + 1e-12) throw std::logic_error("robust_rejection: acceptance ratio exceeds 1");
  if (rng.uniform() < accept) return j;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

RandomizedVectorAccess::RandomizedVectorAccess(OversampledVectorAccess source, double phi_max, double delta,
                                               double eta)
    : source_(std::move(source)), phi_max_(phi_max), delta_(delta), eta_(eta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("randomized access: delta must lie in (0, 1]");
  if (!(eta > 0.0)) throw std::domain_error("randomized access: eta must be positive");
  attempts_ = std::max<Index>(1, static_cast<Index>(std::ceil(phi_max_ * std::log(1.0 / delta_) * std::numbers::e)));
  norm_trials_ = std::max<Index>(1, static_cast<Index>(std::ceil(3.0 * phi_max_ * std::log(2.0 / delta_) / (eta_ * eta_))));
}

double RandomizedVectorAccess::ratio(Index j) const {
  const double bound_sq = std::norm(source_.bound().query(j));
  if (bound_sq == 0.0) return 0.0;
  return std::norm(source_.query(j)) / bound_sq;
}

std::optional<Index> RandomizedVectorAccess::sample(Rng& rng) const {
  const auto& bound = source_.bound();
  for (Index t = 0; t < attempts_; ++t) {
    auto j = robust_rejection([this](Index i) { return ratio(i); }, [&bound](Rng& g) { return bound.sample(g); }, rng);
    if (j) return j;
  }
  return std::nullopt;
}

double RandomizedVectorAccess::estimate_norm(Rng& rng) const {
  const auto& bound = source_.bound();
  Index accepted = 0;
  for (Index t = 0; t < norm_trials_; ++t) {
    const Index j = bound.sample(rng);
    if (rng.uniform() < ratio(j)) ++accepted;
  }
  const double fraction = static_cast<double>(accepted) / static_cast<double>(norm_trials_);
  return std::sqrt(fraction) * bound.norm();
}

double RandomizedVectorAccess::acceptance_probability() const {
  const auto p = source_.bound().sampler_distribution();
  double acc = 0.0;
  for (Index j = 0; j < size(); ++j) acc += p[static_cast<std::size_t>(j)] * ratio(j);
  return acc;
}

Distribution RandomizedVectorAccess::conditional_distribution() const {
  auto p = source_.bound().sampler_distribution();
  double acc = 0.0;
  for (Index j = 0; j < size(); ++j) acc += p[static_cast<std::size_t>(j)] *= ratio(j);
  if (!(acc > 0.0)) throw std::domain_error("randomized access: zero acceptance probability");
  for (auto& x : p) x /= acc;
  return p;
}

RandomizedVectorAccess to_randomized_access(const OversampledVectorAccess& u, double phi_max, double delta,
                                            double eta) {
  if (phi_max < u.phi() * (1.0 - 1e-12)) throw std::domain_error("to_randomized_access: phi_max < phi");
  if (!(u.epsilon() < 1.0 / (2.0 * u.phi()))) throw std::domain_error("to_randomized_access: epsilon >= 1/(2 phi)");
  return RandomizedVectorAccess(u, phi_max, delta, eta);
}

// ---------------------------------------------------------------------------

OversampledVectorAccess linear_combination_access(const std::vector<OversampledVectorAccess>& terms,
                                                  const std::vector<Complex>& lambda) {
  if (terms.empty() || terms.size() != lambda.size())
    throw std::invalid_argument("linear_combination_access: need one coefficient per term");
  const Index n = terms.front().size();
  const auto count = static_cast<double>(terms.size());
  auto v = std::make_shared<Vec>(Vec::Zero(n));
  auto w = std::make_shared<Vec>(Vec::Zero(n));
  std::vector<double> mix(terms.size(), 0.0);
  double eps = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (t.size() != n) throw std::invalid_argument("linear_combination_access: length mismatch");
    const double l2 = std::norm(lambda[i]);
    if (l2 == 0.0) continue;
    const auto& b = t.bound();
    for (Index j = 0; j < n; ++j) {
      (*v)(j) += lambda[i] * t.query(j);
      (*w)(j) += l2 * std::norm(b.query(j));
    }
    mix[i] = l2 * b.norm() * b.norm();
    eps = std::max(eps, t.epsilon());
  }
  for (Index j = 0; j < n; ++j) (*w)(j) = std::sqrt(count * (*w)(j).real());
  const double v_sq = v->squaredNorm();
  if (!(v_sq > 0.0)) throw std::domain_error("linear_combination_access: combination is zero");

  auto tree = std::make_shared<WeightTree>(mix);
  const double w_norm = std::sqrt(count * tree->total());
  AccessCallbacks cb;
  cb.size = n;
  cb.query = [w](Index j) { return (*w)(j); };
  cb.sample = [terms, tree](Rng& rng) { return terms[static_cast<std::size_t>(tree->sample(rng))].bound().sample(rng); };
  cb.norm = w_norm;
  cb.epsilon = eps;
  cb.distribution = [terms, tree, n] {
    Distribution p(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < tree->size(); ++i) {
      const double qi = tree->probability(i);
      if (qi == 0.0) continue;
      const auto pi = terms[static_cast<std::size_t>(i)].bound().sampler_distribution();
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += qi * pi[j];
    }
    return p;
  };
  const double phi = w_norm * w_norm / v_sq;
  return OversampledVectorAccess([v](Index j) { return (*v)(j); }, std::make_shared<CallbackVectorAccess>(std::move(cb)),
                                 std::max(phi, 1.0));
}

// ---------------------------------------------------------------------------

OversampledMatrixAccess access_of_SA(const OversampledMatrixAccess& a, const SketchDescription& s) {
  auto sup = std::make_shared<SketchSupport>(sketch_support(a, s));
  const double sa_sq = sketched_frobenius_sq(a, s);
  if (!(sa_sq > 0.0)) throw std::domain_error("access_of_SA: SA is zero");

  std::vector<VectorAccessPtr> rows(static_cast<std::size_t>(s.size()));
  Vec norms = Vec::Zero(s.size());
  for (std::size_t t = 0; t < sup->members.size(); ++t) {
    const Index k = sup->members[t];
    const double alpha = s.scales[static_cast<std::size_t>(k)];
    rows[static_cast<std::size_t>(k)] = scaled_access(sup->bound_rows[t], alpha);
    norms(k) = alpha * sup->bound_rows[t]->norm();
  }
  const Index r = s.size();
  AccessCallbacks cb;
  cb.size = r;
  cb.query = [norms](Index k) { return norms(k); };
  cb.sample = [sup](Rng& rng) { return sup->members[rng.below(sup->members.size())]; };
  cb.norm = std::sqrt(sup->bound_frobenius_sq);
  cb.epsilon = 0.0;
  cb.distribution = [sup, r] {
    Distribution p(static_cast<std::size_t>(r), 0.0);
    for (Index k : sup->members) p[static_cast<std::size_t>(k)] = 1.0 / static_cast<double>(sup->members.size());
    return p;
  };
  auto bound = std::make_shared<StoredMatrixAccess>(r, a.cols(), std::move(rows),
                                                    std::make_shared<CallbackVectorAccess>(std::move(cb)));
  const double phi = sup->bound_frobenius_sq / sa_sq;
  auto src = a;
  auto desc = std::make_shared<SketchDescription>(s);
  return OversampledMatrixAccess(
      [src, desc](Index k, Index j) {
        const double alpha = desc->scales[static_cast<std::size_t>(k)];
        return alpha == 0.0 ? Complex(0.0) : alpha * src.query(desc->indices[static_cast<std::size_t>(k)], j);
      },
      std::move(bound), std::max(phi, 1.0));
}

OversampledMatrixAccess access_of_SA_dagger(const OversampledMatrixAccess& a, const SketchDescription& s) {
  auto sup = std::make_shared<SketchSupport>(sketch_support(a, s));
  const double sa_sq = sketched_frobenius_sq(a, s);
  if (!(sa_sq > 0.0)) throw std::domain_error("access_of_SA_dagger: SA is zero");
  auto desc = std::make_shared<SketchDescription>(s);
  const Index r = s.size();
  const Index n = a.cols();

  // Column j of S Abar, conjugated: entries alpha_k conj(Abar(s_k, j)).
  auto bound_row = [sup, desc, r](Index j) {
    Vec row = Vec::Zero(r);
    for (std::size_t t = 0; t < sup->members.size(); ++t) {
      const Index k = sup->members[t];
      row(k) = desc->scales[static_cast<std::size_t>(k)] * std::conj(sup->bound_rows[t]->query(j));
    }
    return row;
  };
  auto row_fn = [bound_row](Index j) -> VectorAccessPtr {
    Vec row = bound_row(j);
    if (!(row.squaredNorm() > 0.0)) return nullptr;
    return build_exact_vector_access(row);
  };

  AccessCallbacks cb;
  cb.size = n;
  cb.query = [bound_row](Index j) { return Complex(bound_row(j).norm()); };
  cb.sample = [sup](Rng& rng) {
    const auto t = rng.below(sup->members.size());
    return sup->bound_rows[t]->sample(rng);
  };
  cb.norm = std::sqrt(sup->bound_frobenius_sq);
  cb.epsilon = a.epsilon();
  cb.distribution = [sup, n] {
    Distribution p(static_cast<std::size_t>(n), 0.0);
    const double w = 1.0 / static_cast<double>(sup->members.size());
    for (const auto& row : sup->bound_rows) {
      const auto pr = row->sampler_distribution();
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += w * pr[j];
    }
    return p;
  };
  auto bound = std::make_shared<CallbackMatrixAccess>(n, r, row_fn, std::make_shared<CallbackVectorAccess>(std::move(cb)),
                                                      a.epsilon());
  const double phi = sup->bound_frobenius_sq / sa_sq;
  auto src = a;
  return OversampledMatrixAccess(
      [src, desc](Index j, Index k) {
        const double alpha = desc->scales[static_cast<std::size_t>(k)];
        return alpha == 0.0 ? Complex(0.0) : alpha * std::conj(src.query(desc->indices[static_cast<std::size_t>(k)], j));
      },
      std::move(bound), std::max(phi, 1.0));
}

OversampledMatrixAccess column_matrix_access(const OversampledVectorAccess& u) {
  auto bound = u.bound_ptr();
  auto row_fn = [bound](Index j) -> VectorAccessPtr {
    const Complex value = bound->query(j);
    if (value == Complex(0.0)) return nullptr;
    return build_exact_vector_access(Vec::Constant(1, value));
  };
  AccessCallbacks cb;
  cb.size = u.size();
  cb.query = [bound](Index j) { return Complex(std::abs(bound->query(j))); };
  cb.sample = [bound](Rng& rng) { return bound->sample(rng); };
  cb.norm = bound->norm();
  cb.epsilon = bound->epsilon();
  cb.distribution = [bound] { return bound->sampler_distribution(); };
  auto matrix = std::make_shared<CallbackMatrixAccess>(u.size(), 1, row_fn,
                                                       std::make_shared<CallbackVectorAccess>(std::move(cb)), bound->epsilon());
  auto q = u.query_fn();
  return OversampledMatrixAccess([q](Index j, Index) { return q(j); }, std::move(matrix), u.phi());
}

}  // namespace dequant
