#pragma once

#include <cstdint>
#include <utility>

namespace kclink {

/// Counter-based generator built on the SplitMix64 output function
/// (Steele, Lea & Flood, 2014). Draw k of stream (seed, stream, substream) is
/// mix64(key + (k + 1) * golden_gamma), where key is derived by mixing the
/// three identifiers. Streams are therefore independent of each other and of
/// evaluation order.
///
/// Algorithm identifier: "splitmix64-counter/1". Changing any constant or the
/// key derivation changes every synthetic dataset; bump the version if you do.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-counter/1";

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  std::uint64_t next_u64();
  /// Uniform on (0, 1]; never returns 0 so log() is always finite.
  double uniform_open0();
  /// Standard normal via Box-Muller; both outputs of a pair are used.
  double normal();

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace kclink
