#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lcsvd/snapshot.hpp"

namespace lcsvd {

/// Mean and population standard deviation of an error sample.
struct BiasUncertainty {
  double bias = 0.0;
  double uncertainty = 0.0;
};

/// Single-pass (Welford) mean and population standard deviation.
/// This is the one routine behind every bias/uncertainty figure in the library.
BiasUncertainty bias_uncertainty(std::span<const double> errors);

/// Normalized histogram: edges.size() == densities.size() + 1 and
/// sum(density * width) == 1.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> densities;

  double integral() const;
};

/// Freedman-Diaconis binning with at least 16 bins (capped at kMaxBins).
/// A zero-range sample yields one unit-width bin centred on the value.
Histogram density_curve(std::span<const double> errors);
inline constexpr std::size_t kMinBins = 16;
inline constexpr std::size_t kMaxBins = 10000;

/// Spatial compression J / N_s.
struct CompressionRate {
  double exact = 0.0;
  long long rounded = 0;  // nearest integer, halves rounded up
};
CompressionRate compression_rate(std::size_t j, std::size_t n_sensors);

/// original - reconstructed restricted to one component, all points and
/// snapshots, divided by `scale`.
std::vector<double> component_errors(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed,
                                     const TensorShape& shape, std::size_t component, double scale = 1.0);

/// Per-component bias and uncertainty; errors are divided by u_inf when present.
std::vector<BiasUncertainty> component_statistics(const Eigen::MatrixXd& original,
                                                  const Eigen::MatrixXd& reconstructed,
                                                  const TensorShape& shape, std::optional<double> u_inf);

struct ErrorReport {
  SnapshotTensor errors;                     // original - reconstructed
  std::optional<SnapshotTensor> normalized;  // errors / u_inf, when u_inf is known
  SnapshotTensor abs_error;                  // |original - reconstructed|
  std::vector<std::size_t> worst_snapshot;   // per component: snapshot holding the largest point error
  std::vector<Histogram> histograms;         // per component, of the normalized errors when available
  std::vector<BiasUncertainty> statistics;   // per component, same sample as the histogram
  CompressionRate compression;
  std::size_t n_sensors = 0;
  double rrmse_percent = 0.0;

  bool normalized_by_u_inf() const { return normalized.has_value(); }
};

ErrorReport build_error_report(const SnapshotTensor& original, const SnapshotTensor& reconstructed,
                               std::size_t n_sensors);

/// Writes report.json, error_hist_<c>.csv and abs_error_worst_<c>.snt into `dir`.
void write_error_report(const ErrorReport& report, const std::filesystem::path& dir);

}  // namespace lcsvd
