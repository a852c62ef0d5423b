#pragma once

#include <limits>
#include <optional>
#include <string>

#include "dequant/core_access.hh"

namespace dequant {

enum class PerturbationKind {
  MassShiftToLightest,
  MassShiftToHeaviest,
  AdversarialAgainstThreshold,
  UniformMix,
};

/// Recipe for an explicit p~ with TV(p~, p) <= budget.
///
/// Mass-shift kinds move mass onto a single recipient (ties go to the highest
/// index) from donors taken greedily from the opposite end of the ordering.
/// The adversarial kind ranks indices by |target(i)| / |u(i)|: the recipient
/// has the largest ratio not exceeding ratio_cap, donors the smallest ratios.
/// Uniform mix blends p with the uniform distribution.
struct PerturbationModel {
  PerturbationKind kind = PerturbationKind::MassShiftToLightest;
  double budget = 0.0;
  std::optional<Vec> target;
  double ratio_cap = std::numeric_limits<double>::infinity();
};

struct PerturbedDistribution {
  Distribution p_tilde;
  double achieved_tv = 0.0;
};

/// p is p_u; u is only consulted by the adversarial kind.
PerturbedDistribution perturb_distribution(const Distribution& p, const Vec& u, const PerturbationModel& model);

/// Same queries and norm as `access`; samples from the perturbed p_u.
VectorAccessPtr perturb(const VectorAccessPtr& access, const PerturbationModel& model);

/// Perturbs every row sampler and the row-norm sampler with the same model.
/// The adversarial kind is not supported here.
std::shared_ptr<const StoredMatrixAccess> perturb(const MatrixAccess& access, const PerturbationModel& model);

const char* to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(const std::string& name);

}  // namespace dequant
