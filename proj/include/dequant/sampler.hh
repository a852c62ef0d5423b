#pragma once

#include <span>
#include <vector>

#include "dequant/rng.hh"
#include "dequant/types.hh"

namespace dequant {

/// Discrete sampler over n nonnegative weights backed by a Fenwick
/// (cumulative-weight) tree. Sampling, weight updates and prefix sums are
/// O(log n); point weight queries are O(1).
class WeightTree {
 public:
  WeightTree() = default;
  explicit WeightTree(std::span<const double> weights);

  Index size() const { return static_cast<Index>(weights_.size()); }
  double weight(Index i) const { return weights_[static_cast<std::size_t>(i)]; }
  double total() const { return total_; }

  /// Probability of index i, weight(i) / total().
  double probability(Index i) const { return total_ > 0 ? weight(i) / total_ : 0.0; }

  void set_weight(Index i, double w);

  /// Draws i with probability weight(i) / total(). Requires total() > 0.
  Index sample(Rng& rng) const;

  /// Smallest i such that weight(0) + ... + weight(i) > target.
  Index search(double target) const;

  Distribution distribution() const;

 private:
  std::vector<double> weights_;
  std::vector<double> tree_;  // 1-based Fenwick array
  double total_ = 0.0;
  Index top_bit_ = 0;
};

}  // namespace dequant
