#include "dequant/perturbation.hh"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dequant {

namespace {

// Mass actually moved; keeps the summed TV at or below the budget after rounding.
double movable(double budget) { return budget * (1.0 - 1e-12); }

// Moves up to `amount` from donors (in order) to `recipient`.
void shift_mass(Distribution& q, Index recipient, const std::vector<Index>& donors, double amount) {
  double moved = 0.0;
  for (Index d : donors) {
    if (moved >= amount) break;
    if (d == recipient) continue;
    auto& qd = q[static_cast<std::size_t>(d)];
    const double take = std::min(qd, amount - moved);
    qd -= take;
    moved += take;
  }
  q[static_cast<std::size_t>(recipient)] += moved;
}

std::vector<Index> indices_by(const std::vector<double>& key, bool ascending) {
  std::vector<Index> idx(key.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  // Stable on the index so equal keys resolve deterministically.
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const double ka = key[static_cast<std::size_t>(a)], kb = key[static_cast<std::size_t>(b)];
    return ascending ? ka < kb : ka > kb;
  });
  return idx;
}

// Highest index attaining the extreme key.
Index extreme_index(const std::vector<double>& key, bool smallest) {
  Index best = 0;
  for (Index i = 1; i < static_cast<Index>(key.size()); ++i) {
    const double k = key[static_cast<std::size_t>(i)], kb = key[static_cast<std::size_t>(best)];
    if (smallest ? k <= kb : k >= kb) best = i;
  }
  return best;
}

double summed_tv(const Distribution& p, const Distribution& q) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

}  // namespace

PerturbedDistribution perturb_distribution(const Distribution& p, const Vec& u, const PerturbationModel& model) {
  if (!(model.budget >= 0.0) || model.budget > 1.0) throw std::domain_error("perturb: budget must lie in [0, 1]");
  if (p.empty()) throw std::invalid_argument("perturb: empty distribution");
  Distribution q = p;
  if (model.budget == 0.0) return {q, 0.0};
  const double amount = movable(model.budget);

  switch (model.kind) {
    case PerturbationKind::MassShiftToLightest: {
      const Index recipient = extreme_index(p, true);
      shift_mass(q, recipient, indices_by(p, false), amount);
      break;
    }
    case PerturbationKind::MassShiftToHeaviest: {
      const Index recipient = extreme_index(p, false);
      shift_mass(q, recipient, indices_by(p, true), amount);
      break;
    }
    case PerturbationKind::AdversarialAgainstThreshold: {
      if (!model.target || model.target->size() != u.size() || u.size() != static_cast<Index>(p.size()))
        throw std::invalid_argument("perturb: adversarial model needs a target of matching length");
      const auto& v = *model.target;
      std::vector<double> ratio(p.size());
      Index recipient = -1;
      double best = -1.0;
      for (Index i = 0; i < u.size(); ++i) {
        const double ui = std::abs(u(i));
        ratio[static_cast<std::size_t>(i)] = ui > 0 ? std::abs(v(i)) / ui : std::numeric_limits<double>::infinity();
        const double r = ratio[static_cast<std::size_t>(i)];
        if (ui > 0 && r < model.ratio_cap && r >= best) {
          best = r;
          recipient = i;
        }
      }
      if (recipient < 0) recipient = extreme_index(p, true);
      shift_mass(q, recipient, indices_by(ratio, true), amount);
      break;
    }
    case PerturbationKind::UniformMix: {
      const double n = static_cast<double>(p.size());
      double tv_uniform = 0.0;
      for (double x : p) tv_uniform += std::abs(x - 1.0 / n);
      tv_uniform *= 0.5;
      if (tv_uniform > 0.0) {
        const double lambda = std::min(1.0, amount / tv_uniform);
        for (auto& x : q) x = (1.0 - lambda) * x + lambda / n;
      }
      break;
    }
  }
  return {q, summed_tv(p, q)};
}

VectorAccessPtr perturb(const VectorAccessPtr& access, const PerturbationModel& model) {
  const Vec u = access->materialize();
  const Distribution p = access->ideal_distribution();
  auto result = perturb_distribution(p, u, model);
  return std::make_shared<PerturbedVectorAccess>(access, result.p_tilde, result.achieved_tv);
}

std::shared_ptr<const StoredMatrixAccess> perturb(const MatrixAccess& access, const PerturbationModel& model) {
  if (model.kind == PerturbationKind::AdversarialAgainstThreshold)
    throw std::invalid_argument("perturb: adversarial model is defined for vectors only");
  std::vector<VectorAccessPtr> rows(static_cast<std::size_t>(access.rows()));
  for (Index i = 0; i < access.rows(); ++i)
    if (auto r = access.row(i)) rows[static_cast<std::size_t>(i)] = perturb(r, model);

  // Re-wrap the row-norm access so it can be shared.
  const auto& rn = access.row_norms();
  Vec norms(access.rows());
  for (Index i = 0; i < access.rows(); ++i) norms(i) = rn.query(i);
  auto norm_access = perturb(build_exact_vector_access(norms), model);
  return std::make_shared<StoredMatrixAccess>(access.rows(), access.cols(), std::move(rows), std::move(norm_access));
}

const char* to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::MassShiftToLightest: return "mass-shift-to-lightest";
    case PerturbationKind::MassShiftToHeaviest: return "mass-shift-to-heaviest";
    case PerturbationKind::AdversarialAgainstThreshold: return "adversarial-against-threshold";
    case PerturbationKind::UniformMix: return "uniform-mix";
  }
  return "unknown";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
  for (auto k : {PerturbationKind::MassShiftToLightest, PerturbationKind::MassShiftToHeaviest,
                 PerturbationKind::AdversarialAgainstThreshold, PerturbationKind::UniformMix})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown perturbation model: " + name);
}

}  // namespace dequant
