#pragma once

#include <cstdint>
#include <limits>

namespace dequant {

/// Counter-based generator keyed by a 64-bit stream key.
///
/// Output k of a stream is a bijective mix of (key, k), so a stream is fully
/// determined by its key. `split(id)` derives an independent child key, which
/// gives every trial / batch / component its own reproducible stream from one
/// root seed. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc908ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGamma * ++counter_); }

  /// Child stream; does not advance this stream.
  Rng split(std::uint64_t stream_id) const;

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool coin() { return ((*this)() >> 63) != 0; }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dequant
