#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lcsvd {

/// Seeded generator with a fixed, fully specified output sequence.
///
/// The engine is std::mt19937_64, whose sequence the standard pins down. The
/// standard distributions are implementation-defined, so the uniform, bounded
/// integer and normal transforms are implemented here. Changing any of them
/// must bump kName.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/lcsvd-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

  /// Mixes a base seed with stream identifiers into an independent seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// k distinct indices from [0, n), sorted ascending (Floyd's algorithm).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace lcsvd
