#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lcsvd/lcsvd.hpp"
#include "lcsvd/sensors.hpp"
#include "lcsvd/snapshot.hpp"

namespace lcsvd {

/// 100 * ||original - reconstructed||_F / ||original||_F.
double rrmse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed);

/// RRMSE against result.reconstruct() without materializing it (column blocks).
double rrmse(const Eigen::MatrixXd& original, const LcsvdResult& result);

/// Modes retained for a sensor count: floor(mode_fraction * n_sensors).
std::size_t modes_for(std::size_t n_sensors, double mode_fraction);

struct OsLcsvdConfig {
  std::size_t n_sensors = 10;
  double mode_fraction = 0.2;
  double tolerance_epsilon = 1.0;  // RRMSE bound, percent
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  bool materialize_reconstruction = true;

  std::size_t n_modes() const { return modes_for(n_sensors, mode_fraction); }
  void validate(std::size_t j) const;
};

struct OsLcsvdOutcome {
  SensorSet sensors;
  LcsvdResult result;
  double rrmse_percent = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> history;  // RRMSE of every attempt, in order
};

/// One placement attempt: a random row subsample of size n_sensors is
/// factored (all snapshots kept), its temporal basis lifted to full-J modes,
/// and QR-pivot sensors are placed against those modes.
SensorSet draw_placement(const SnapshotMatrix& matrix, std::size_t n_sensors, std::size_t n_modes,
                         std::uint64_t seed);

/// Sensor placement + lcSVD, repeated with fresh random initial subsamples
/// until RRMSE < tolerance_epsilon or max_iterations attempts are spent.
/// On exhaustion the best attempt is returned with converged == false.
OsLcsvdOutcome os_lcsvd_optimize(const SnapshotMatrix& matrix, const OsLcsvdConfig& config);

struct SensorCountSearchConfig {
  std::size_t start = 10;
  std::size_t step = 5;
  std::size_t max_sensors = 100;
  std::size_t runs_per_count = 100;
  double stall_threshold = 0.05;  // relative improvement; may be +infinity
  std::uint64_t seed = 0;

  void validate(std::size_t j) const;
};

/// Curves below this mean RRMSE (percent) have reached the reconstruction floor.
inline constexpr double kRrmseFloor = 1e-6;

struct SearchPoint {
  std::size_t n_sensors;
  double mean_rrmse;
};

struct SensorCountSearchResult {
  std::size_t n_opt = 0;
  double epsilon = 0.0;  // mean RRMSE at n_opt rounded to the nearest 0.5
  bool stalled = false;  // false: max_sensors reached first
  std::vector<SearchPoint> curve;
};

/// Walks start, start + step, ... up to max_sensors. n_opt is the first count
/// whose successor improves the mean RRMSE by less than stall_threshold
/// (relative), or whose mean RRMSE is already below kRrmseFloor.
SensorCountSearchResult find_optimal_sensor_count(const SnapshotMatrix& matrix,
                                                  const SensorCountSearchConfig& search, double mode_fraction);

/// Stall rule applied to a finished curve.
std::pair<std::size_t, bool> stall_point(std::span<const SearchPoint> curve, double stall_threshold);

struct ElbowPoint {
  std::size_t n_sensors;
  double bias;
  double uncertainty;
};

struct ElbowCurve {
  std::size_t component;
  std::vector<ElbowPoint> points;
  std::size_t elbow;  // sensor count at the largest second difference of uncertainty
};

/// Bias and uncertainty of each component's reconstruction error over a
/// sensor-count range, averaged over runs_per_count placements. Requires a
/// tensor origin; errors are divided by u_inf when the dataset has one.
std::vector<ElbowCurve> elbow_curve(const SnapshotMatrix& matrix, std::span<const std::size_t> sensor_range,
                                    double mode_fraction, std::size_t runs_per_count, std::uint64_t seed);

/// Sensor count maximizing u[i-1] - 2 u[i] + u[i+1] over interior points;
/// the first count when fewer than three points exist.
std::size_t find_elbow(std::span<const ElbowPoint> points);

}  // namespace lcsvd
