#include "dequant/sampler.hh"

#include <stdexcept>

namespace dequant {

WeightTree::WeightTree(std::span<const double> weights)
    : weights_(weights.begin(), weights.end()), tree_(weights.size() + 1, 0.0) {
  const auto n = weights_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights_[i] >= 0.0)) throw std::domain_error("WeightTree: negative or NaN weight");
    tree_[i + 1] += weights_[i];
    total_ += weights_[i];
    const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (parent <= n) tree_[parent] += tree_[i + 1];
  }
  top_bit_ = 1;
  while (static_cast<std::size_t>(top_bit_) * 2 <= n) top_bit_ *= 2;
}

void WeightTree::set_weight(Index i, double w) {
  if (!(w >= 0.0)) throw std::domain_error("WeightTree: negative or NaN weight");
  const double delta = w - weights_[static_cast<std::size_t>(i)];
  weights_[static_cast<std::size_t>(i)] = w;
  total_ += delta;
  for (auto k = static_cast<std::size_t>(i) + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
}

Index WeightTree::search(double target) const {
  std::size_t pos = 0;
  for (auto step = static_cast<std::size_t>(top_bit_); step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  // pos is the count of leading entries whose cumulative weight is <= target.
  // Skip trailing zero-weight entries that can be reached through rounding.
  auto idx = static_cast<Index>(pos);
  const Index n = size();
  if (idx >= n) idx = n - 1;
  while (idx > 0 && weights_[static_cast<std::size_t>(idx)] == 0.0) --idx;
  while (idx < n - 1 && weights_[static_cast<std::size_t>(idx)] == 0.0) ++idx;
  return idx;
}

Index WeightTree::sample(Rng& rng) const {
  if (!(total_ > 0.0)) throw std::domain_error("WeightTree: sampling from zero total weight");
  return search(rng.uniform() * total_);
}

Distribution WeightTree::distribution() const {
  Distribution p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = total_ > 0 ? weights_[i] / total_ : 0.0;
  return p;
}

}  // namespace dequant
