#pragma once

#include <cstdint>
#include <vector>

#include "lcsvd/snapshot.hpp"

namespace lcsvd {

enum class SyntheticKind { exact_rank, oscillatory_wake, noisy_low_rank };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::exact_rank;
  std::size_t j = 0;       // exact_rank / noisy_low_rank
  std::size_t n_comp = 2;  // oscillatory_wake
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::size_t k = 0;
  std::size_t rank = 1;
  double noise_level = 0.0;  // noise std as a fraction of the RMS entry
  double amplitude = 1.0;    // oscillatory_wake: amplitude of the leading mode pair
  std::uint64_t seed = 0;

  void validate() const;
};

/// V = A B^T with standard-normal A (J x r) and B (K x r).
SnapshotMatrix gen_exact_rank(const SyntheticSpec& spec);

/// gen_exact_rank plus i.i.d. Gaussian noise of standard deviation
/// noise_level * ||V||_F / sqrt(J K), drawn from a separate stream.
SnapshotMatrix gen_noisy(const SyntheticSpec& spec);

/// Cylinder-wake-like analytic field on a 2-D grid with two velocity
/// components (u_inf = 1): a steady deficit wake plus rank/2 travelling mode
/// pairs whose frequencies complete whole periods over the K snapshots.
/// Odd ranks are rounded up. noise_level adds Gaussian noise as in gen_noisy.
SnapshotTensor gen_oscillatory_wake(const SyntheticSpec& spec);

/// The analytic field behind gen_oscillatory_wake.
class WakeField {
 public:
  WakeField(std::size_t pairs, double amplitude, std::size_t k, std::uint64_t seed);

  /// Velocity component (0 = streamwise, 1 = normal) at (x, y) and continuous time t (snapshot units).
  double velocity(std::size_t component, double x, double y, double t) const;
  double mean(std::size_t component, double x, double y) const;
  double fluctuation(std::size_t component, double x, double y, double t) const;

  /// Sum of |a_m|, the bound on |fluctuation|.
  double amplitude_sum() const;

  static constexpr double kXMin = -2.0, kXMax = 14.0, kYMin = -4.0, kYMax = 4.0;
  static constexpr double kRadius = 0.5;

 private:
  struct Pair {
    double amplitude, omega, wavenumber, phase, centre, spread;
  };
  std::vector<Pair> pairs_;
};

/// Grid coordinate of index i on [lo, hi] with n points.
double grid_coordinate(std::size_t i, std::size_t n, double lo, double hi);

}  // namespace lcsvd
