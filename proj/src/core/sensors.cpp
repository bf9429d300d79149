#include "lcsvd/sensors.hpp"

#include <string>

#include "lcsvd/error.hpp"

namespace lcsvd {

namespace {
// A pass stops once the best remaining residual is this small relative to its first pivot.
constexpr double kExhausted = 1e-10;
}  // namespace

SensorSet place_sensors(const Eigen::MatrixXd& w, std::size_t p, const std::optional<TensorShape>& layout) {
  const auto j = static_cast<std::size_t>(w.rows());
  const auto n = static_cast<std::size_t>(w.cols());
  require(n >= 1, "place_sensors: basis has no modes");
  require(p >= 1, "place_sensors: need at least one sensor");
  if (p > j)
    throw ValidationError("place_sensors: " + std::to_string(p) + " sensors requested but J = " +
                          std::to_string(j));
  if (layout) require(layout->spatial_size() == j, "place_sensors: layout does not match basis rows");

  SensorSet out;
  out.n_basis = n;
  out.indices.reserve(p);
  const Eigen::MatrixXd wt = w.transpose();

  std::vector<std::size_t> candidates(j);
  for (std::size_t i = 0; i < j; ++i) candidates[i] = i;

  while (out.indices.size() < p) {
    const Eigen::MatrixXd block = candidates.size() == j ? wt : select_cols(wt, candidates);
    const std::size_t want = std::min(p - out.indices.size(), std::min(n, candidates.size()));
    if (block.cwiseAbs().maxCoeff() == 0.0) {
      // Basis vanishes on every remaining row: fall back to index order.
      for (std::size_t i = 0; i < want; ++i) out.indices.push_back(candidates[i]);
    } else {
      const auto qr = qr_pivoted(block, want);
      const double first = std::abs(qr.r(0, 0));
      for (std::size_t s = 0; s < want; ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        if (s > 0 && !(std::abs(qr.r(si, si)) > kExhausted * first)) break;
        out.indices.push_back(candidates[qr.pivots[s]]);
      }
    }
    std::vector<bool> taken(j, false);
    for (auto idx : out.indices) taken[idx] = true;
    std::vector<std::size_t> rest;
    rest.reserve(j - out.indices.size());
    for (auto c : candidates)
      if (!taken[c]) rest.push_back(c);
    candidates = std::move(rest);
  }
  if (layout) decode_sensors(out, *layout);
  return out;
}

SensorSet place_sensors(const TruncatedFactorization& basis, std::size_t p, const std::optional<TensorShape>& layout) {
  return place_sensors(basis.modes, p, layout);
}

Eigen::MatrixXd measure(const SnapshotMatrix& matrix, const SensorSet& sensors) {
  for (auto idx : sensors.indices)
    if (idx >= matrix.j())
      throw ValidationError("measure: sensor index " + std::to_string(idx) + " out of range (J = " +
                            std::to_string(matrix.j()) + ")");
  return select_rows(matrix.values(), sensors.indices);
}

void decode_sensors(SensorSet& sensors, const TensorShape& layout) {
  std::vector<GridPoint> coords;
  coords.reserve(sensors.indices.size());
  for (auto idx : sensors.indices) coords.push_back(decode_row(layout, idx));
  sensors.grid_coords = std::move(coords);
}

}  // namespace lcsvd
