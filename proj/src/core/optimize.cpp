#include "lcsvd/optimize.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "lcsvd/error.hpp"
#include "lcsvd/error_metrics.hpp"
#include "lcsvd/rng.hpp"

namespace lcsvd {

namespace {

constexpr Eigen::Index kRrmseBlock = 256;

double frobenius(const Eigen::MatrixXd& m) { return m.norm(); }

std::optional<TensorShape> layout_of(const SnapshotMatrix& m) {
  if (m.origin()) return m.origin()->shape;
  return std::nullopt;
}

struct Attempt {
  SensorSet sensors;
  LcsvdResult result;
  double rrmse = std::numeric_limits<double>::infinity();
};

Attempt attempt(const SnapshotMatrix& matrix, std::size_t n_sensors, std::size_t n_modes, std::uint64_t seed,
                bool materialize) {
  Attempt a;
  a.sensors = draw_placement(matrix, n_sensors, n_modes, seed);
  const auto plan = make_plan_from_rows(matrix.j(), matrix.k(), a.sensors.indices);
  a.result = lcsvd_run(matrix, plan, ModeCountRule{n_modes}, LcsvdOptions{.materialize_reconstruction = materialize});
  a.rrmse = materialize ? rrmse(matrix.values(), a.result.reconstruction) : rrmse(matrix.values(), a.result);
  return a;
}

}  // namespace

double rrmse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed) {
  require(original.rows() == reconstructed.rows() && original.cols() == reconstructed.cols(),
          "rrmse: shape mismatch");
  const double denom = frobenius(original);
  if (!(denom > 0.0)) throw ValidationError("rrmse: original has zero norm");
  return 100.0 * frobenius(original - reconstructed) / denom;
}

double rrmse(const Eigen::MatrixXd& original, const LcsvdResult& result) {
  require(original.rows() == result.recovered_modes.rows() && original.cols() == result.recovered_coefficients.rows(),
          "rrmse: shape mismatch");
  const double denom = frobenius(original);
  if (!(denom > 0.0)) throw ValidationError("rrmse: original has zero norm");
  const Eigen::MatrixXd scaled = result.recovered_modes * result.reduced_factorization.singular_values.asDiagonal();
  double sum = 0.0;
  Eigen::MatrixXd block;
  for (Eigen::Index c0 = 0; c0 < original.cols(); c0 += kRrmseBlock) {
    const Eigen::Index w = std::min(kRrmseBlock, original.cols() - c0);
    block = original.middleCols(c0, w);
    block.noalias() -= scaled * result.recovered_coefficients.middleRows(c0, w).transpose();
    sum += block.squaredNorm();
  }
  return 100.0 * std::sqrt(sum) / denom;
}

std::size_t modes_for(std::size_t n_sensors, double mode_fraction) {
  require(mode_fraction > 0.0 && mode_fraction <= 1.0, "mode_fraction must be in (0, 1]");
  // Tiny slack so that e.g. 0.2 * 35 lands on 7 rather than 6.999...
  return static_cast<std::size_t>(std::floor(mode_fraction * static_cast<double>(n_sensors) + 1e-9));
}

void OsLcsvdConfig::validate(std::size_t j) const {
  require(n_sensors >= 1, "OS-lcSVD: n_sensors must be at least 1");
  if (n_sensors > j)
    throw ValidationError("OS-lcSVD: " + std::to_string(n_sensors) + " sensors requested but J = " + std::to_string(j));
  if (n_modes() < 1)
    throw ValidationError("OS-lcSVD: n_sensors = " + std::to_string(n_sensors) + " is too small for mode_fraction " +
                          std::to_string(mode_fraction) + " (no modes retained)");
  require(tolerance_epsilon > 0.0, "OS-lcSVD: tolerance must be positive");
  require(max_iterations >= 1, "OS-lcSVD: max_iterations must be at least 1");
}

SensorSet draw_placement(const SnapshotMatrix& matrix, std::size_t n_sensors, std::size_t n_modes,
                         std::uint64_t seed) {
  require(n_sensors >= 1 && n_sensors <= matrix.j(), "draw_placement: sensor count out of range");
  require(n_modes >= 1, "draw_placement: need at least one mode");
  Rng rng(seed);
  const auto rows = sample_without_replacement(rng, matrix.j(), n_sensors);
  const Eigen::MatrixXd subsample = select_rows(matrix.values(), rows);
  const auto reduced = svd_truncated(subsample, ModeCountRule{n_modes});

  // Lift the subsample's temporal basis to full-J modes.
  Eigen::MatrixXd lifted(static_cast<Eigen::Index>(matrix.j()), reduced.coefficients.cols());
  lifted.noalias() = matrix.values() * (reduced.coefficients * reduced.singular_values.cwiseInverse().asDiagonal());
  const auto basis = svd_truncated(lifted, ModeCountRule{n_modes});
  return place_sensors(basis.modes, n_sensors, layout_of(matrix));
}

OsLcsvdOutcome os_lcsvd_optimize(const SnapshotMatrix& matrix, const OsLcsvdConfig& config) {
  config.validate(matrix.j());
  const auto n_modes = config.n_modes();
  OsLcsvdOutcome out;
  std::optional<Attempt> best;
  std::optional<NumericalError> last_error;

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    ++out.iterations;
    try {
      auto a = attempt(matrix, config.n_sensors, n_modes, Rng::derive(config.seed, it), false);
      out.history.push_back(a.rrmse);
      if (!best || a.rrmse < best->rrmse) best = std::move(a);
    } catch (const NumericalError& e) {
      out.history.push_back(std::numeric_limits<double>::infinity());
      last_error = e;
      continue;
    }
    if (best->rrmse < config.tolerance_epsilon) {
      out.converged = true;
      break;
    }
  }
  if (!best) throw *last_error;

  out.sensors = std::move(best->sensors);
  out.result = std::move(best->result);
  out.rrmse_percent = best->rrmse;
  if (config.materialize_reconstruction) out.result.reconstruction = out.result.reconstruct();
  return out;
}

void SensorCountSearchConfig::validate(std::size_t j) const {
  require(start >= 10, "sensor search: start must be at least 10");
  require(step >= 1, "sensor search: step must be at least 1");
  require(max_sensors >= start, "sensor search: max_sensors must be >= start");
  require(start <= j, "sensor search: start exceeds J");
  require(runs_per_count >= 1, "sensor search: runs_per_count must be at least 1");
  require(stall_threshold >= 0.0, "sensor search: stall_threshold must be non-negative");
}

std::pair<std::size_t, bool> stall_point(std::span<const SearchPoint> curve, double threshold) {
  require(!curve.empty(), "stall_point: empty curve");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double m = curve[i].mean_rrmse;
    if (m < kRrmseFloor) return {curve[i].n_sensors, true};
    if (i + 1 < curve.size()) {
      const double improvement = (m - curve[i + 1].mean_rrmse) / m;
      if (improvement < threshold) return {curve[i].n_sensors, true};
    }
  }
  return {curve.back().n_sensors, false};
}

SensorCountSearchResult find_optimal_sensor_count(const SnapshotMatrix& matrix, const SensorCountSearchConfig& search,
                                                  double mode_fraction) {
  search.validate(matrix.j());
  require(modes_for(search.start, mode_fraction) >= 1, "sensor search: start too small for mode_fraction");
  const std::size_t last = std::min(search.max_sensors, matrix.j());

  SensorCountSearchResult out;
  for (std::size_t n = search.start; n <= last; n += search.step) {
    const auto n_modes = modes_for(n, mode_fraction);
    double sum = 0.0;
    for (std::size_t r = 0; r < search.runs_per_count; ++r)
      sum += attempt(matrix, n, n_modes, Rng::derive(search.seed, n, r), false).rrmse;
    out.curve.push_back({n, sum / static_cast<double>(search.runs_per_count)});

    const auto [n_opt, stalled] = stall_point(out.curve, search.stall_threshold);
    if (stalled) {
      out.n_opt = n_opt;
      out.stalled = true;
      break;
    }
  }
  if (!out.stalled) out.n_opt = out.curve.back().n_sensors;
  for (const auto& p : out.curve)
    if (p.n_sensors == out.n_opt) out.epsilon = std::round(p.mean_rrmse * 2.0) / 2.0;
  return out;
}

std::vector<ElbowCurve> elbow_curve(const SnapshotMatrix& matrix, std::span<const std::size_t> sensor_range,
                                    double mode_fraction, std::size_t runs_per_count, std::uint64_t seed) {
  if (!matrix.origin())
    throw ValidationError("elbow_curve: per-component errors need a tensor origin (load an SNT1 tensor)");
  require(!sensor_range.empty(), "elbow_curve: empty sensor range");
  require(runs_per_count >= 1, "elbow_curve: runs_per_count must be at least 1");
  const auto& shape = matrix.origin()->shape;
  const auto u_inf = matrix.origin()->u_inf;

  std::vector<ElbowCurve> curves(shape.n_comp);
  for (std::size_t c = 0; c < shape.n_comp; ++c) curves[c].component = c;

  for (auto s : sensor_range) {
    require(s >= 1 && s <= matrix.j(), "elbow_curve: sensor count " + std::to_string(s) + " out of range");
    const auto n_modes = modes_for(s, mode_fraction);
    if (n_modes < 1)
      throw ValidationError("elbow_curve: sensor count " + std::to_string(s) + " retains no modes at this fraction");
    std::vector<BiasUncertainty> sum(shape.n_comp);
    for (std::size_t r = 0; r < runs_per_count; ++r) {
      const auto a = attempt(matrix, s, n_modes, Rng::derive(seed, s, r), true);
      const auto stats = component_statistics(matrix.values(), a.result.reconstruction, shape, u_inf);
      for (std::size_t c = 0; c < shape.n_comp; ++c) {
        sum[c].bias += stats[c].bias;
        sum[c].uncertainty += stats[c].uncertainty;
      }
    }
    const auto runs = static_cast<double>(runs_per_count);
    for (std::size_t c = 0; c < shape.n_comp; ++c)
      curves[c].points.push_back({s, sum[c].bias / runs, sum[c].uncertainty / runs});
  }
  for (auto& curve : curves) curve.elbow = find_elbow(curve.points);
  return curves;
}

std::size_t find_elbow(std::span<const ElbowPoint> points) {
  require(!points.empty(), "find_elbow: empty curve");
  if (points.size() < 3) return points.front().n_sensors;
  std::size_t best = 1;
  double best_curvature = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double d2 = points[i - 1].uncertainty - 2.0 * points[i].uncertainty + points[i + 1].uncertainty;
    if (d2 > best_curvature) {
      best_curvature = d2;
      best = i;
    }
  }
  return points[best].n_sensors;
}

}  // namespace lcsvd
